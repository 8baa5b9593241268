#include "ferrohopf/hopf_locus.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "ferrohopf/errors.hpp"
#include "ferrohopf/hyperbolic.hpp"

namespace ferrohopf {

LocusTerms locus_terms(double q, const LawJet& j) {
    if (!(q > 0.0)) throw std::invalid_argument("hopf locus requires q > 0");
    const double m = m_ratio(j);
    const double qt = m * q;
    const double k = j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0);
    const double S = hyp::xcoth(qt) + j.mu1 * hyp::xcoth(q);
    const double C = hyp::x2csch2(qt) + j.mu1 * hyp::x2csch2(q);
    return {k / (2.0 * S), k * C / (2.0 * S * S)};
}

HopfPoint hopf_point(double q, const LawJet& j) {
    j.validate();
    const auto [T1, T2] = locus_terms(q, j);
    HopfPoint h;
    h.q = q;
    h.beta0 = T1 + T2;
    h.alpha0 = q * q * (T1 - T2);
    h.gamma0 = h.alpha0 * h.beta0;
    h.qtilde = q * m_ratio(j);
    return h;
}

std::vector<HopfPoint> trace_locus(const LawJet& j, const std::vector<double>& q_grid) {
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (!(q_grid[i] > 0.0)) throw std::invalid_argument("trace_locus: grid must be positive");
        if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
            throw std::invalid_argument("trace_locus: grid must be strictly increasing");
    }
    std::vector<HopfPoint> out;
    out.reserve(q_grid.size());
    for (double q : q_grid) out.push_back(hopf_point(q, j));
    return out;
}

double locus_deep_limit(const LawJet& j) {
    return j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0) / (2.0 * (m_ratio(j) + j.mu1));
}

double invert_locus_beta(double beta0, const LawJet& j) {
    j.validate();
    const double beta_zero = j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0) / (1.0 + j.mu1);
    if (!(beta0 > 0.0) || !(beta0 < beta_zero))
        throw numerical_error("locus inversion: beta0 outside (0, beta_HH(0+))", "beta_HH");
    const auto f = [&](double q) { return hopf_point(q, j).beta0 - beta0; };
    // q beta_HH(q) tends to the deep limit, which gives a starting scale.
    double hi = std::max(1.0, 2.0 * locus_deep_limit(j) / beta0);
    double lo = 1e-6;
    double fhi = f(hi);
    for (int k = 0; k < 200 && fhi > 0.0; ++k) {
        hi *= 2.0;
        fhi = f(hi);
    }
    double flo = f(lo);
    if (!(flo > 0.0) || !(fhi < 0.0))
        throw numerical_error("locus inversion: failed to bracket beta_HH(q) = beta0", "beta_HH");
    boost::uintmax_t iters = 300;
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace ferrohopf
