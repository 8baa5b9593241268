#include "ferrohopf/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "ferrohopf/errors.hpp"
#include "ferrohopf/hyperbolic.hpp"

namespace ferrohopf {

namespace {

constexpr int scan_points = 400;
constexpr double root_tol = 1e-12;
constexpr double double_root_dtol = 1e-8;

double d_scale(double q, const LawJet& j) {
    return std::max(1.0, q * q * j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0));
}

double dd_scale(double q, const LawJet& j) {
    return std::max(1.0, q * j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0));
}

template <class F>
double bracket_root(F&& f, double a, double b, double fa, double fb) {
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

FluidParams::FluidParams(double beta0, double alpha0) : beta0_(beta0), alpha0_(alpha0) {
    if (!(beta0 > 0.0) || !std::isfinite(beta0))
        throw std::invalid_argument("FluidParams requires beta0 > 0");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
        throw std::invalid_argument("FluidParams requires alpha0 > 0");
}

double m_ratio(const LawJet& jet) { return std::sqrt(jet.mu1 / (jet.mu1 + jet.dmu1)); }

double disp_imag(double q, const FluidParams& p, const LawJet& j) {
    if (!(q > 0.0)) throw std::invalid_argument("disp_imag requires q > 0");
    const double m = m_ratio(j);
    const double S = hyp::xcoth(m * q) + j.mu1 * hyp::xcoth(q);
    return q * q * j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0) - (p.alpha0() + q * q * p.beta0()) * S;
}

double disp_imag_dq(double q, const FluidParams& p, const LawJet& j) {
    if (!(q > 0.0)) throw std::invalid_argument("disp_imag_dq requires q > 0");
    const double m = m_ratio(j);
    const double S = hyp::xcoth(m * q) + j.mu1 * hyp::xcoth(q);
    const double dS = m * hyp::dxcoth(m * q) + j.mu1 * hyp::dxcoth(q);
    return 2.0 * q * j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0) - 2.0 * q * p.beta0() * S -
           (p.alpha0() + q * q * p.beta0()) * dS;
}

int ImaginaryRootSet::pair_count() const {
    int n = 0;
    for (int k : multiplicities) n += k;
    return n;
}

double imag_root_bound(const FluidParams& p, const LawJet& j) {
    return j.mu1 * (j.mu1 - 1.0) * (j.mu1 - 1.0) / (p.beta0() * (m_ratio(j) + j.mu1));
}

ImaginaryRootSet imag_roots(const FluidParams& p, const LawJet& j, double q_max) {
    j.validate();
    // Since x coth x >= x, D(q) <= q^2 [mu1 (mu1-1)^2 - beta0 (m + mu1) q], so every
    // root lies below the bound.
    if (q_max <= 0.0) q_max = 1.05 * imag_root_bound(p, j);
    const double q_lo = q_max * 1e-6;
    const auto D = [&](double q) { return disp_imag(q, p, j); };
    const auto dD = [&](double q) { return disp_imag_dq(q, p, j); };

    std::vector<double> grid(scan_points);
    for (int i = 0; i < scan_points; ++i)
        grid[i] = q_lo * std::pow(q_max / q_lo, static_cast<double>(i) / (scan_points - 1));

    // Critical points of D split the axis into monotone pieces, so a root pair
    // squeezed between two grid nodes is still isolated.
    struct Node {
        double q, d;
        bool critical;
    };
    std::vector<Node> nodes;
    std::vector<double> dgrid(scan_points);
    for (int i = 0; i < scan_points; ++i) dgrid[i] = dD(grid[i]);
    ImaginaryRootSet out;
    std::vector<double> doubles;
    for (int i = 0; i < scan_points; ++i) {
        nodes.push_back({grid[i], D(grid[i]), false});
        if (i + 1 < scan_points && dgrid[i] * dgrid[i + 1] < 0.0) {
            const double c = bracket_root(dD, grid[i], grid[i + 1], dgrid[i], dgrid[i + 1]);
            double dc = D(c);
            if (std::abs(dc) < root_tol * d_scale(c, j) &&
                std::abs(dD(c)) < double_root_dtol * dd_scale(c, j)) {
                doubles.push_back(c);
                dc = 0.0;
            }
            nodes.push_back({c, dc, true});
        }
    }

    std::vector<std::pair<double, int>> found;
    for (double c : doubles) found.emplace_back(c, 2);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const Node& a = nodes[k];
        const Node& b = nodes[k + 1];
        if (!(a.d * b.d < 0.0)) continue;
        const double r = bracket_root(D, a.q, b.q, a.d, b.d);
        if (!(std::abs(D(r)) <= root_tol * d_scale(r, j) * 16.0))
            throw numerical_error("imag_roots: bracket refinement did not reach tolerance",
                                  "toms748");
        found.emplace_back(r, 1);
    }
    std::sort(found.begin(), found.end());
    for (const auto& [r, k] : found) {
        out.roots.push_back(r);
        out.multiplicities.push_back(k);
    }
    return out;
}

std::complex<double> disp_complex(std::complex<double> sigma, const FluidParams& p,
                                  const LawJet& j) {
    const double m = m_ratio(j);
    const double pp = j.mu1 + j.dmu1;
    const std::complex<double> st = m * sigma;
    const auto ss = std::sin(sigma), cs = std::cos(sigma);
    const auto sst = std::sin(st), cst = std::cos(st);
    return (j.mu1 - 1.0) * (j.mu1 - 1.0) * pp * sigma * st * ss * sst -
           (sigma * sigma * p.beta0() - p.alpha0()) * (sigma * ss * cst + pp * st * sst * cs);
}

std::complex<double> disp_complex_dsigma(std::complex<double> s, const FluidParams& p,
                                         const LawJet& j) {
    const double m = m_ratio(j);
    const double pp = j.mu1 + j.dmu1;
    const double k = (j.mu1 - 1.0) * (j.mu1 - 1.0) * pp;
    const auto ss = std::sin(s), cs = std::cos(s);
    const auto sm = std::sin(m * s), cm = std::cos(m * s);
    const auto g1d = m * (2.0 * s * ss * sm + s * s * cs * sm + m * s * s * ss * cm);
    const auto g2 = s * s * p.beta0() - p.alpha0();
    const auto g2d = 2.0 * s * p.beta0();
    const auto g3 = s * ss * cm + pp * m * s * sm * cs;
    const auto g3d = ss * cm + s * cs * cm - m * s * ss * sm +
                     pp * m * (sm * cs + m * s * cm * cs - s * sm * ss);
    return k * g1d - g2d * g3 - g2 * g3d;
}

double disp_complex_scale(std::complex<double> s, const FluidParams& p, const LawJet& j) {
    const double m = m_ratio(j);
    const double pp = j.mu1 + j.dmu1;
    const auto ss = std::sin(s), cs = std::cos(s);
    const auto sm = std::sin(m * s), cm = std::cos(m * s);
    const double t1 = (j.mu1 - 1.0) * (j.mu1 - 1.0) * pp * std::abs(m * s * s * ss * sm);
    const double t2 = std::abs(s * s * p.beta0() - p.alpha0()) *
                      (std::abs(s * ss * cm) + pp * std::abs(m * s * sm * cs));
    return t1 + t2;
}

double imag_axis_factor(double s, const LawJet& j) {
    const double m = m_ratio(j);
    return (j.mu1 + j.dmu1) * m * std::sinh(s) * std::sinh(m * s) / j.mu1;
}

std::complex<double> complex_roots_near(std::complex<double> seed, const FluidParams& p,
                                        const LawJet& j, int max_iter) {
    j.validate();
    std::complex<double> z = seed;
    if (z == std::complex<double>(0.0, 0.0)) throw numerical_error("Newton seed at the excluded point sigma = 0", "complex_roots_near");
    for (int it = 0; it < max_iter; ++it) {
        const auto f = disp_complex(z, p, j);
        const double scale = disp_complex_scale(z, p, j);
        if (std::abs(f) <= 1e-12 * std::max(1.0, scale)) {
            if (std::abs(z) < 1e-8)
                throw numerical_error("Newton converged to the excluded point sigma = 0",
                                      "complex_roots_near");
            return z;
        }
        const auto df = disp_complex_dsigma(z, p, j);
        if (df == std::complex<double>(0.0, 0.0) || !std::isfinite(std::abs(df)))
            throw numerical_error("Newton derivative vanished or overflowed",
                                  "complex_roots_near");
        // Newton on F / sigma^2, which removes the double root at the origin.
        const auto dg = df - 2.0 * f / z;
        if (dg == std::complex<double>(0.0, 0.0)) throw numerical_error("Newton derivative vanished", "complex_roots_near");
        const auto dz = f / dg;
        z -= dz;
        if (!std::isfinite(std::abs(z)))
            throw numerical_error("Newton iterate overflowed", "complex_roots_near");
        if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) {
            if (std::abs(z) < 1e-8)
                throw numerical_error("Newton converged to the excluded point sigma = 0",
                                      "complex_roots_near");
            return z;
        }
    }
    throw numerical_error("Newton did not converge within the iteration budget",
                          "complex_roots_near");
}

}  // namespace ferrohopf
