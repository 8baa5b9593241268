#include "ferrohopf/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "ferrohopf/errors.hpp"
#include "ferrohopf/hopf_locus.hpp"

namespace ferrohopf {

namespace {

constexpr double singular_tol = 1e-12;

void check_nonsingular(double v, const char* term) {
    if (!(std::abs(v) > singular_tol))
        throw numerical_error(std::string("singular parameter point: ") + term + " vanishes", term);
}

}  // namespace

std::string to_string(CoeffSource s) {
    switch (s) {
        case CoeffSource::finite_depth_linear_law:
            return "finite_depth_linear_law";
        case CoeffSource::deep_fluid_general_law:
            return "deep_fluid_general_law";
        case CoeffSource::user:
            return "user";
    }
    return "unknown";
}

FiniteDepthTerms finite_depth_terms(double mu, double q, double b, double g) {
    if (!(mu > 1.0)) throw std::invalid_argument("finite-depth coefficients require mu > 1");
    if (!(q > 0.0)) throw std::invalid_argument("finite-depth coefficients require q > 0");
    if (!(b > 0.0)) throw std::invalid_argument("finite-depth coefficients require beta0 > 0");

    // Hyperbolic factors in t = exp(-2q) so that q in the thousands stays finite.
    const double t = std::exp(-2.0 * q);
    const double t2 = t * t;
    const double om = -std::expm1(-2.0 * q);      // 1 - t
    const double om4 = -std::expm1(-8.0 * q);     // 1 - t^4
    const double sech2 = 4.0 * t / ((1.0 + t) * (1.0 + t));
    const double sech_2q = 2.0 * t / (1.0 + t2);
    const double tanh_q = om / (1.0 + t);
    const double tanh_2q = -std::expm1(-4.0 * q) / (1.0 + t2);
    const double kappa = (mu - 1.0) * (mu - 1.0) / (mu + 1.0);
    const double mu6 = std::pow(mu - 1.0, 6) / std::pow(mu + 1.0, 4);
    const double qb = q * b;

    FiniteDepthTerms r;
    r.beta0 = b;
    r.gamma0 = g;
    r.prefactor_base = 1.0 + (mu / b) * kappa * (q * tanh_q - 1.0) * sech2;
    check_nonsingular(r.prefactor_base, "prefactor");
    r.denominator = 2.0 * qb * kappa * mu * tanh_2q - g - 4.0 * qb * qb;
    check_nonsingular(r.denominator, "cosh-group denominator");
    check_nonsingular(g, "gamma0");

    // (-3 - 4 cosh 2q + cosh 4q) / (cosh^2 q cosh 2q)
    const double x_ratio =
        4.0 * ((1.0 + t2 * t2) - 4.0 * t * (1.0 + t2) - 6.0 * t2) / ((1.0 + t) * (1.0 + t) * (1.0 + t2));
    const double y = -2.0 + sech2 + 4.0 * sech_2q;
    const double qb4 = qb * qb * qb * qb;
    r.t_cosh = qb4 * mu * mu / 4.0 * mu6 * x_ratio * y / r.denominator;
    r.t_sech4 = qb4 * mu * mu / g * mu6 * sech2 * sech2;

    // cosech 2q cosh^2 q = coth(q) / 2 and cosech 2q sech 2q = 4 t^2 / (1 - t^4)
    const double csch_cosh2 = 0.5 * (1.0 + t) / om;
    const double csch_sech = 4.0 * t2 / om4;
    const double mp1 = mu + 1.0;
    r.t_cosech = qb * qb * qb / (4.0 * mp1 * mp1 * mp1) *
                 (-16.0 * mu * std::pow(mu * mu - 1.0, 2) * csch_cosh2 +
                  16.0 * std::pow(mu - 1.0, 4) * mu * csch_sech + 6.0 * qb * mp1 * mp1 * mp1);
    return r;
}

NormalFormCoeffs coeffs_finite_depth_linear(double mu, double q) {
    return coeffs_finite_depth_linear(mu, q, nullptr);
}

NormalFormCoeffs coeffs_finite_depth_linear(double mu, double q, FiniteDepthTerms* terms) {
    if (!(mu > 1.0)) throw std::invalid_argument("finite-depth coefficients require mu > 1");
    const HopfPoint h = hopf_point(q, LawJet::constant(mu));
    const FiniteDepthTerms r = finite_depth_terms(mu, q, h.beta0, h.gamma0);
    if (terms) *terms = r;
    NormalFormCoeffs c;
    const double pre = 1.0 / r.prefactor_base;
    c.c1 = -pre;
    c.c3 = 0.5 * pre * (r.t_cosh + r.t_sech4 + r.t_cosech);
    c.source = CoeffSource::finite_depth_linear_law;
    return c;
}

DeepFluidResult coeffs_deep_fluid(const LawJet& j) {
    j.validate();
    const double mu1 = j.mu1, d1 = j.dmu1, d2 = j.ddmu1, d3 = j.dddmu1;
    const double p = mu1 + d1;
    const double m = std::sqrt(mu1 / p);
    const double e = mu1 - 1.0;
    const double s = e * e * mu1 / (2.0 * (m + mu1));
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;

    const double M00 = 2.0 * s;
    const double M01 = 2.0 * m * s * p;
    const double M10 = 2.0 * mu1 * s - 5.0 * s2 / e;
    const double M11 = 2.0 * m * s * p + 5.0 * s2 / e;
    const double r1 = -4.0 * (m + 1.0) * s3 / e -
                      s4 * (d1 * d1 + mu1 * (d2 + 3.0 * d1)) / (e * e * mu1 * p * p);
    const double r2 = -2.0 * s2 * e * mu1 -
                      s4 / (e * e * mu1 * p * p) *
                          (mu1 * d2 - 28.0 * mu1 * mu1 * d1 - 14.0 * mu1 * d1 * d1 + 17.0 * mu1 * d1 +
                           d1 * d1 - 14.0 * mu1 * mu1 * mu1 + 14.0 * mu1 * mu1);
    const double det = M00 * M11 - M01 * M10;
    const double det_scale = std::abs(M00 * M11) + std::abs(M01 * M10);
    if (!(std::abs(det) > 1e-12 * det_scale))
        throw numerical_error("deep-fluid 2x2 system is singular for this jet", "a1/a2 system");
    const double a1 = (r1 * M11 - M01 * r2) / det;
    const double a2 = (M00 * r2 - M10 * r1) / det;

    DeepFluidIntermediates in;
    in.s = s;
    in.m = m;
    in.a1 = a1;
    in.a2 = a2;
    const double res1 = M00 * a1 + M01 * a2 - r1;
    const double res2 = M10 * a1 + M11 * a2 - r2;
    in.residual = std::hypot(res1, res2) / std::max(std::hypot(r1, r2), 1e-300);

    const double mu2 = mu1 * mu1, mu3 = mu2 * mu1, mu4 = mu3 * mu1;
    const double e3 = e * e * e, e4 = e3 * e;
    auto& g = in.groups;
    g[0] = 3.0 * s4 / 4.0;
    g[1] = -4.0 * s4 * s / (e * e) * (1.0 + m / p);
    g[2] = -s4 * s2 / (e4 * mu1 * p * p * p) *
           (-6.0 * mu2 * d2 + 6.0 * mu1 * d2 + 24.0 * mu3 * d1 + 24.0 * mu2 * d1 * d1 -
            50.0 * mu2 * d1 + 8.0 * mu1 * d1 * d1 * d1 - 22.0 * mu1 * d1 * d1 + 26.0 * mu1 * d1 +
            6.0 * d1 * d1 + 8.0 * mu4 - 16.0 * mu3 + 8.0 * mu2);
    g[3] = m * s4 * s3 / (4.0 * e4 * mu3 * p * p * p * p) *
           (4.0 * mu3 * d3 - 9.0 * mu2 * d2 * d2 + 20.0 * mu3 * d2 - 5.0 * d1 * d1 * d1 * d1 -
            18.0 * mu1 * d1 * d1 * d1 - 37.0 * mu2 * d1 * d1 + 12.0 * mu3 * d1 +
            4.0 * mu2 * d1 * d3 - 2.0 * mu1 * d1 * d1 * d2 - 18.0 * mu2 * d1 * d2);
    g[4] = -4.0 * s4 * (d1 + mu1 - 1.0) * a1 / (e3 * p);
    g[5] = s4 * a2 / (e3 * mu1 * p * p) *
           (mu2 * d2 - mu1 * d2 + 11.0 * mu2 * d1 + 5.0 * mu1 * d1 * d1 - 7.0 * mu1 * d1 - d1 * d1 +
            4.0 * mu3 - 4.0 * mu2);

    DeepFluidResult out;
    out.coeffs.c1 = -1.0;
    out.coeffs.c3 = g[0] + g[1] + g[2] + g[3] + g[4] + g[5];
    out.coeffs.source = CoeffSource::deep_fluid_general_law;
    out.intermediates = in;
    return out;
}

double Axis::at(int i) const {
    if (count <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / (count - 1);
}

RegionGrid region_map(const CoeffFamily& family, const Axis& a1, const Axis& a2, int workers) {
    if (a1.count < 1 || a2.count < 1) throw std::invalid_argument("region_map: empty axis");
    RegionGrid grid;
    grid.axis1 = a1;
    grid.axis2 = a2;
    const std::size_t n = static_cast<std::size_t>(a1.count) * a2.count;
    grid.cells.resize(n);
    auto eval = [&](std::size_t k) {
        RegionCell& c = grid.cells[k];
        const int i = static_cast<int>(k / a2.count);
        const int j = static_cast<int>(k % a2.count);
        c.param1 = a1.at(i);
        c.param2 = a2.at(j);
        try {
            const NormalFormCoeffs nf = family(c.param1, c.param2);
            c.c1 = nf.c1;
            c.c3 = nf.c3;
            c.exists = nf.homoclinic_exists();
            if (!std::isfinite(c.c1) || !std::isfinite(c.c3)) {
                c.singular = true;
                c.exists = false;
                c.note = "non-finite coefficient";
            }
        } catch (const numerical_error& e) {
            c.singular = true;
            c.note = e.term().empty() ? e.what() : e.term();
        } catch (const std::invalid_argument& e) {
            c.singular = true;
            c.note = e.what();
        }
    };
    workers = std::max(1, workers);
    if (workers == 1) {
        for (std::size_t k = 0; k < n; ++k) eval(k);
    } else {
        // Each worker owns a strided set of cells; results land at fixed indices.
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t k = w; k < n; k += workers) eval(k);
            });
        for (auto& t : pool) t.join();
    }
    return grid;
}

CoeffFamily linear_law_family() {
    return [](double mu, double q) { return coeffs_finite_depth_linear(mu, q); };
}

CoeffFamily langevin_deep_family() {
    return [](double ms, double gamma) {
        return coeffs_deep_fluid(jet_at_one(MagnetisationLaw::langevin_gamma(ms, gamma))).coeffs;
    };
}

ConsistencyReport consistency_deep_vs_finite(double mu, const std::vector<double>& betas) {
    if (!(mu > 1.0)) throw std::invalid_argument("consistency study requires mu > 1");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] < betas[i - 1]))
            throw std::invalid_argument("consistency study: beta0 sequence must decrease");
    const LawJet jet = LawJet::constant(mu);
    const DeepFluidResult deep = coeffs_deep_fluid(jet);
    ConsistencyReport rep;
    rep.mu = mu;
    rep.deep_c1 = deep.coeffs.c1;
    rep.deep_c3 = deep.coeffs.c3;
    rep.roundoff_floor = 1e-11 * std::max(1.0, std::abs(rep.deep_c3));
    for (double b : betas) {
        ConsistencyRow row;
        row.beta0 = b;
        row.q = invert_locus_beta(b, jet);
        const NormalFormCoeffs fin = coeffs_finite_depth_linear(mu, row.q);
        row.c1 = fin.c1;
        row.c3 = fin.c3;
        row.c1_gap = std::abs(fin.c1 - rep.deep_c1);
        row.c3_gap = std::abs(fin.c3 - rep.deep_c3);
        if (!rep.rows.empty()) {
            const ConsistencyRow& prev = rep.rows.back();
            const double lb = std::log(prev.beta0 / b);
            auto order = [&](double g0, double g1) {
                return (g0 > 0.0 && g1 > 0.0) ? std::log(g0 / g1) / lb : 0.0;
            };
            row.c1_order = order(prev.c1_gap, row.c1_gap);
            row.c3_order = order(prev.c3_gap, row.c3_gap);
        }
        rep.rows.push_back(row);
    }
    rep.c1_monotone = rep.c3_monotone = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const auto& a = rep.rows[i - 1];
        const auto& b = rep.rows[i];
        if (!(b.c1_gap <= a.c1_gap || b.c1_gap <= rep.roundoff_floor)) rep.c1_monotone = false;
        if (!(b.c3_gap <= a.c3_gap || b.c3_gap <= rep.roundoff_floor)) rep.c3_monotone = false;
    }
    return rep;
}

double critical_mu_deep(double lo, double hi) {
    const auto f = [](double mu) { return coeffs_deep_fluid(LawJet::constant(mu)).coeffs.c3; };
    const double flo = f(lo), fhi = f(hi);
    if (!(flo * fhi < 0.0))
        throw not_found_error("deep-fluid c3 has no sign change on the requested mu interval");
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

bool langevin_bifurcates(double saturation, const Axis& gamma_axis) {
    const CoeffFamily fam = langevin_deep_family();
    for (int i = 0; i < gamma_axis.count; ++i) {
        try {
            if (fam(saturation, gamma_axis.at(i)).homoclinic_exists()) return true;
        } catch (const numerical_error&) {
        }
    }
    return false;
}

double critical_saturation_langevin(const Axis& gamma_axis, double lo, double hi, double tol) {
    if (langevin_bifurcates(lo, gamma_axis))
        throw not_found_error("Langevin law already bifurcates at the lower saturation bound");
    if (!langevin_bifurcates(hi, gamma_axis))
        throw not_found_error("Langevin law does not bifurcate below the upper saturation bound");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (langevin_bifurcates(mid, gamma_axis) ? hi : lo) = mid;
    }
    return hi;
}

std::optional<double> deep_branch_onset(double mu, double q_lo, double q_hi, int scan) {
    const auto c3 = [&](double q) { return coeffs_finite_depth_linear(mu, q).c3; };
    const auto exists = [&](double q) {
        try {
            return coeffs_finite_depth_linear(mu, q).homoclinic_exists();
        } catch (const numerical_error&) {
            return false;
        }
    };
    if (!exists(q_hi)) return std::nullopt;
    double prev = q_hi;
    for (int k = 1; k <= scan; ++k) {
        const double q = q_hi - (q_hi - q_lo) * k / scan;
        if (!exists(q)) {
            // The boundary is a sign change of c3 (c1 stays negative), refine it.
            double a = q, b = prev;
            double fa = c3(a), fb = c3(b);
            if (fa * fb < 0.0) {
                boost::uintmax_t iters = 200;
                const auto r = boost::math::tools::toms748_solve(
                    c3, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(45), iters);
                return 0.5 * (r.first + r.second);
            }
            return prev;
        }
        prev = q;
    }
    return q_lo;
}

}  // namespace ferrohopf
