#include "ferrohopf/reduced_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_real.h>

#include "ferrohopf/errors.hpp"

namespace ferrohopf {

namespace {

ReducedState operator+(const ReducedState& a, const ReducedState& b) { return {a.A + b.A, a.B + b.B}; }
ReducedState operator-(const ReducedState& a, const ReducedState& b) { return {a.A - b.A, a.B - b.B}; }
ReducedState operator*(double s, const ReducedState& a) { return {s * a.A, s * a.B}; }

double dist(const ReducedState& a, const ReducedState& b) { return state_norm(a - b); }

struct Coeffs {
    double c1, c2, c3, c4, c5, c6, c7;
};

Coeffs unpack(const NormalFormCoeffs& c) {
    return {c.c1, c.c2.value_or(0.0), c.c3, c.c4.value_or(0.0), c.c5.value_or(0.0),
            c.c6.value_or(0.0), c.c7.value_or(0.0)};
}

// g = Re(conj(A) B) = (1/2) d|A|^2/dx, zero at extrema of |A|.
double extremum_indicator(const ReducedState& u) { return std::real(std::conj(u.A) * u.B); }

}  // namespace

ReducedState reverser(const ReducedState& u) { return {std::conj(u.A), -std::conj(u.B)}; }

double state_norm(const ReducedState& u) { return std::sqrt(std::norm(u.A) + std::norm(u.B)); }

double invariant_K(const ReducedState& u) {
    // i (A conj B - conj A B) = -2 Im(A conj B)
    return -2.0 * std::imag(u.A * std::conj(u.B));
}

double hamiltonian(const ReducedState& u, const ReducedModel& m) {
    const Coeffs c = unpack(m.coeffs);
    const double e = m.eps;
    const double P = std::norm(u.A);
    const double K = invariant_K(u);
    const double hnf = e * c.c1 * P + e * c.c2 * K + c.c3 * P * P + c.c4 * P * K + c.c5 * K * K +
                       e * e * c.c6 * P + e * e * c.c7 * K;
    return m.beta0q * K + std::norm(u.B) + hnf;
}

ReducedState vector_field(const ReducedState& u, const ReducedModel& m) {
    const Coeffs c = unpack(m.coeffs);
    const double e = m.eps;
    const double P = std::norm(u.A);
    const double K = invariant_K(u);
    const double d1 = e * c.c1 + 2.0 * c.c3 * P + c.c4 * K + e * e * c.c6;
    const double d2 = e * c.c2 + c.c4 * P + 2.0 * c.c5 * K + e * e * c.c7;
    const cplx I(0.0, 1.0);
    ReducedState du;
    du.A = I * m.beta0q * u.A + u.B + I * u.A * d2;
    du.B = I * m.beta0q * u.B + I * u.B * d2 - u.A * d1;
    return du;
}

ReducedState gl2_step(const ReducedState& u, const ReducedModel& m, double h) {
    static const double r3 = std::sqrt(3.0);
    const double a11 = 0.25, a12 = 0.25 - r3 / 6.0;
    const double a21 = 0.25 + r3 / 6.0, a22 = 0.25;
    ReducedState k1 = vector_field(u, m);
    ReducedState k2 = k1;
    const double scale = 1.0 + state_norm(u);
    for (int it = 0; it < 100; ++it) {
        const ReducedState n1 = vector_field(u + h * (a11 * k1 + a12 * k2), m);
        const ReducedState n2 = vector_field(u + h * (a21 * k1 + a22 * k2), m);
        const double change = std::abs(h) * (dist(n1, k1) + dist(n2, k2));
        k1 = n1;
        k2 = n2;
        if (change <= 1e-17 * scale) break;
    }
    return u + (0.5 * h) * (k1 + k2);
}

Trajectory integrate(const ReducedState& u0, const ReducedModel& m, double x0, double x1,
                     double step, double blowup, int stride) {
    if (!(step > 0.0)) throw std::invalid_argument("integrate requires step > 0");
    stride = std::max(1, stride);
    const auto n = static_cast<long>(std::ceil(std::abs(x1 - x0) / step - 1e-12));
    Trajectory tr;
    tr.x.push_back(x0);
    tr.u.push_back(u0);
    if (n == 0) return tr;
    const double h = (x1 - x0) / static_cast<double>(n);
    ReducedState u = u0;
    for (long k = 1; k <= n; ++k) {
        u = gl2_step(u, m, h);
        const double x = (k == n) ? x1 : x0 + static_cast<double>(k) * h;
        const double nu = state_norm(u);
        if (!std::isfinite(nu) || nu > blowup) {
            tr.x.push_back(x);
            tr.u.push_back(u);
            tr.blew_up = true;
            return tr;
        }
        if (k % stride == 0 || k == n) {
            tr.x.push_back(x);
            tr.u.push_back(u);
        }
    }
    return tr;
}

double step_halving_error(const ReducedState& u0, const ReducedModel& m, double x0, double x1,
                          double step) {
    const Trajectory a = integrate(u0, m, x0, x1, step);
    const Trajectory b = integrate(u0, m, x0, x1, 0.5 * step);
    if (a.blew_up || b.blew_up) throw numerical_error("blow-up during step-halving estimate", "integrate");
    return dist(a.u.back(), b.u.back());
}

DriftReport measure_drift(const Trajectory& tr, const ReducedModel& m) {
    DriftReport d;
    if (tr.u.empty()) return d;
    const double H0 = hamiltonian(tr.u.front(), m);
    const double K0 = invariant_K(tr.u.front());
    for (const auto& u : tr.u) {
        d.H_drift = std::max(d.H_drift, std::abs(hamiltonian(u, m) - H0));
        d.K_drift = std::max(d.K_drift, std::abs(invariant_K(u) - K0));
    }
    return d;
}

AmplitudePrediction predict_amplitude(const ReducedModel& m) {
    const double c1 = m.coeffs.c1, c3 = m.coeffs.c3, e = m.eps;
    if (!(c1 < 0.0) || !(c3 > 0.0) || !(e > 0.0))
        throw std::invalid_argument("amplitude prediction requires c1 < 0, c3 > 0 and eps > 0");
    return {std::sqrt(-c3 * e / c1), std::sqrt(-c1 * e / c3)};
}

std::string closest_candidate(const AmplitudePrediction& p, double amplitude) {
    return std::abs(amplitude - p.scaling_form) <= std::abs(amplitude - p.intro_form) ? "scaling_form"
                                                                                     : "intro_form";
}

Linearisation linearise_origin(const ReducedModel& m) {
    const Coeffs c = unpack(m.coeffs);
    const double e1 = m.eps * c.c1 + m.eps * m.eps * c.c6;
    const double e2 = m.eps * c.c2 + m.eps * m.eps * c.c7;
    if (!(e1 < 0.0))
        throw std::invalid_argument(
            "origin is not hyperbolic (need eps c1 + eps^2 c6 < 0); no homoclinic orbit to shoot");
    return {std::sqrt(-e1), m.beta0q + e2};
}

namespace {

struct Extremum {
    double x;
    double absA;
    ReducedState u;
};

struct Shot {
    std::vector<double> x;
    std::vector<ReducedState> u;  // recorded states up to (excluding) the target extremum
    std::vector<Extremum> extrema;
    bool reached = false;
    bool blew_up = false;
    double H_drift = 0.0;
    double K_drift = 0.0;
};

ReducedState insertion_state(const Linearisation& lin, double theta, double delta) {
    const cplx a = std::polar(delta, theta);
    return {a, lin.kappa * a};
}

// Integrate from the unstable fibre until the target-th extremum of |A| and
// locate it inside the step by a root solve on the substep length.
Shot shoot(const ReducedModel& m, const Linearisation& lin, double theta, double delta, double h,
           double horizon, int target, int stride) {
    Shot s;
    ReducedState u = insertion_state(lin, theta, delta);
    const double H0 = hamiltonian(u, m);
    const double K0 = invariant_K(u);
    double g = extremum_indicator(u);
    s.x.push_back(0.0);
    s.u.push_back(u);
    const auto nmax = static_cast<long>(std::ceil(horizon / h));
    for (long k = 0; k < nmax; ++k) {
        const ReducedState un = gl2_step(u, m, h);
        const double gn = extremum_indicator(un);
        const double x = static_cast<double>(k) * h;
        if (!std::isfinite(state_norm(un)) || state_norm(un) > 1e6) {
            s.blew_up = true;
            return s;
        }
        s.H_drift = std::max(s.H_drift, std::abs(hamiltonian(un, m) - H0));
        s.K_drift = std::max(s.K_drift, std::abs(invariant_K(un) - K0));
        if ((g > 0.0 && gn <= 0.0) || (g < 0.0 && gn >= 0.0)) {
            const auto f = [&](double t) { return extremum_indicator(gl2_step(u, m, t)); };
            double tau = h;
            if (gn != 0.0) {
                boost::uintmax_t iters = 100;
                const auto r = boost::math::tools::toms748_solve(
                    f, 0.0, h, g, gn, boost::math::tools::eps_tolerance<double>(52), iters);
                tau = 0.5 * (r.first + r.second);
            }
            const ReducedState ue = gl2_step(u, m, tau);
            s.extrema.push_back({x + tau, std::abs(ue.A), ue});
            if (static_cast<int>(s.extrema.size()) == target) {
                s.reached = true;
                return s;
            }
        }
        u = un;
        g = gn;
        if ((k + 1) % stride == 0) {
            s.x.push_back(static_cast<double>(k + 1) * h);
            s.u.push_back(u);
        }
    }
    return s;
}

double default_horizon(const Linearisation& lin, double delta, int pulses) {
    return pulses * (std::log(1.0 / delta) + 30.0) / lin.kappa;
}

// Least-squares slope of ln|A| against x on samples with lo <= |A| <= hi.
double fit_decay(const std::vector<double>& x, const std::vector<ReducedState>& u, double lo,
                 double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::abs(u[i].A);
        if (a < lo || a > hi) continue;
        const double y = std::log(a);
        sx += x[i];
        sy += y;
        sxx += x[i] * x[i];
        sxy += x[i] * y;
        ++n;
    }
    if (n < 5) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Solved {
    Shot shot;
    double theta;
};

Solved solve_phase(const ReducedModel& m, const Linearisation& lin, int branch, double delta,
                   const ShootingOptions& opt, int target) {
    const double horizon =
        opt.horizon > 0.0 ? opt.horizon : default_horizon(lin, delta, (target + 1) / 2);
    auto run = [&](double th) { return shoot(m, lin, th, delta, opt.step, horizon, target, opt.stride); };
    Shot s0 = run(0.0);
    if (!s0.reached) {
        if (s0.blew_up)
            throw not_found_error("no Fix(R) intersection: trajectory escaped before the target extremum");
        throw not_found_error("no Fix(R) intersection within the shooting horizon");
    }
    // Secant on the residual Im A at the target extremum, seeded at the rotation
    // that would align A with the real axis.
    const cplx a0 = s0.extrema.back().u.A;
    double th1 = -std::arg(a0) + (branch < 0 ? std::numbers::pi : 0.0);
    double th0 = th1 - 1e-3;
    auto residual = [&](const Shot& s) { return std::imag(s.extrema.back().u.A); };
    Shot sa = run(th0);
    Shot sb = run(th1);
    if (!sa.reached || !sb.reached) throw not_found_error("shooting lost the target extremum");
    double ra = residual(sa), rb = residual(sb);
    for (int it = 0; it < 40; ++it) {
        const double scale = std::abs(sb.extrema.back().u.A);
        if (std::abs(rb) <= 1e-14 * scale) break;
        if (rb == ra) break;
        const double th2 = th1 - rb * (th1 - th0) / (rb - ra);
        th0 = th1;
        ra = rb;
        th1 = th2;
        sb = run(th1);
        if (!sb.reached) throw not_found_error("shooting lost the target extremum");
        rb = residual(sb);
    }
    const double reA = std::real(sb.extrema.back().u.A);
    if ((branch > 0 && reA <= 0.0) || (branch < 0 && reA >= 0.0))
        throw numerical_error("phase secant converged to the opposite branch", "shooting");
    return {std::move(sb), th1};
}

HomoclinicOrbit build_orbit(const ReducedModel& m, const Linearisation& lin, const Solved& sol,
                            double delta, const ShootingOptions& opt, int branch, int pulses) {
    const Shot& s = sol.shot;
    const Extremum& sym = s.extrema.back();
    HomoclinicOrbit o;
    o.eps = m.eps;
    o.pulse_count = pulses;
    o.symmetric = true;
    o.branch = branch;
    o.theta = sol.theta;
    o.H_drift = s.H_drift;
    o.K_drift = s.K_drift;
    o.fix_residual = std::max(std::abs(std::imag(sym.u.A)), std::abs(std::real(sym.u.B)));

    double amp = 0.0;
    for (const auto& e : s.extrema) amp = std::max(amp, e.absA);
    for (const auto& u : s.u) amp = std::max(amp, std::abs(u.A));
    o.amplitude = amp;

    // Left half relative to the symmetry point: linear tail, then the shot.
    std::vector<double> xl;
    std::vector<ReducedState> ul;
    const double dxs = opt.step * opt.stride;
    const double tail_len = std::max(0.0, std::log(delta / (opt.tail_ratio * amp)) / lin.kappa);
    const auto ntail = static_cast<long>(std::ceil(tail_len / dxs)) + 1;
    const cplx I(0.0, 1.0);
    const ReducedState u0 = insertion_state(lin, sol.theta, delta);
    for (long j = ntail; j >= 1; --j) {
        const double xs = -static_cast<double>(j) * dxs;
        const cplx f = std::exp((I * lin.omega + lin.kappa) * xs);
        xl.push_back(xs - sym.x);
        ul.push_back({u0.A * f, u0.B * f});
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!(s.x[i] < sym.x)) break;
        xl.push_back(s.x[i] - sym.x);
        ul.push_back(s.u[i]);
    }

    o.x.reserve(2 * xl.size() + 1);
    o.u.reserve(2 * xl.size() + 1);
    for (std::size_t i = 0; i < xl.size(); ++i) {
        o.x.push_back(xl[i]);
        o.u.push_back(ul[i]);
    }
    o.x.push_back(0.0);
    o.u.push_back(sym.u);
    for (std::size_t i = xl.size(); i-- > 0;) {
        o.x.push_back(-xl[i]);
        o.u.push_back(reverser(ul[i]));
    }

    const std::size_t n = o.x.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        o.reversibility_residual =
            std::max(o.reversibility_residual, dist(o.u[n - 1 - i], reverser(o.u[i])));
    o.end_ratio = std::max({std::abs(o.u.front().A), std::abs(o.u.front().B), std::abs(o.u.back().A),
                            std::abs(o.u.back().B)}) /
                  amp;

    // Integrate both ways from the symmetry point; the two halves agree under R
    // only when that point lies on Fix(R).
    const double span = std::min(sym.x, 5.0 / lin.kappa);
    const Trajectory fw = integrate(sym.u, m, 0.0, span, opt.step);
    const Trajectory bw = integrate(sym.u, m, 0.0, -span, opt.step);
    for (std::size_t i = 0; i < std::min(fw.u.size(), bw.u.size()); ++i) {
        if (std::abs(fw.u[i].A) < 1e-2 * amp) break;
        o.forward_reflection_residual =
            std::max(o.forward_reflection_residual, dist(fw.u[i], reverser(bw.u[i])) / amp);
    }

    o.decay_rate = fit_decay(s.x, s.u, 10.0 * delta, 1e-2 * amp);
    if (!std::isfinite(o.decay_rate)) o.decay_rate = fit_decay(s.x, s.u, 10.0 * delta, 1e-1 * amp);
    return o;
}

}  // namespace

std::vector<HomoclinicOrbit> find_symmetric_homoclinic(const ReducedModel& m, const ShootingOptions& opt) {
    if (!(m.eps > 0.0))
        throw std::invalid_argument("homoclinic search requires eps > 0 (origin is a centre otherwise)");
    const Linearisation lin = linearise_origin(m);
    std::vector<HomoclinicOrbit> out;
    for (int branch : {1, -1}) {
        const Solved sol = solve_phase(m, lin, branch, opt.delta, opt, 1);
        HomoclinicOrbit o = build_orbit(m, lin, sol, opt.delta, opt, branch, 1);
        const Solved fine = solve_phase(m, lin, branch, opt.richardson_delta, opt, 1);
        double amp_fine = 0.0;
        for (const auto& e : fine.shot.extrema) amp_fine = std::max(amp_fine, e.absA);
        o.insertion_sensitivity = std::abs(amp_fine - o.amplitude) / o.amplitude;
        out.push_back(std::move(o));
    }
    return out;
}

HomoclinicOrbit find_multipulse(const ReducedModel& m, int pulses, const ShootingOptions& opt) {
    if (pulses < 1) throw std::invalid_argument("find_multipulse requires pulses >= 1");
    if (pulses == 1) return find_symmetric_homoclinic(m, opt).front();
    if (!(m.eps > 0.0))
        throw std::invalid_argument("homoclinic search requires eps > 0 (origin is a centre otherwise)");
    const Linearisation lin = linearise_origin(m);
    // The symmetry point of an N-pulse is the N-th extremum of |A| (a maximum for
    // odd N, the middle trough for even N).
    const Solved sol = solve_phase(m, lin, 1, opt.delta, opt, pulses);
    const auto& ex = sol.shot.extrema;
    double amp = 0.0;
    for (const auto& e : ex) amp = std::max(amp, e.absA);
    for (std::size_t k = 1; k < ex.size(); k += 2) {
        if (ex[k].absA < 1e3 * opt.delta)
            throw not_found_error(
                "multipulse search: only near-origin pseudo-returns found (trough below 1e3 delta)");
    }
    HomoclinicOrbit o = build_orbit(m, lin, sol, opt.delta, opt, 1, pulses);
    return o;
}

Profile synthesize_profile(const HomoclinicOrbit& orbit, const ReducedModel& m,
                           const std::vector<double>& x_grid) {
    Profile p;
    p.x = x_grid;
    p.eta.assign(x_grid.size(), 0.0);
    if (orbit.x.size() < 2) {
        if (!x_grid.empty()) p.warnings.push_back("empty orbit: profile is identically zero");
        return p;
    }
    std::size_t outside = 0;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        if (x < orbit.x.front() || x > orbit.x.back()) {
            ++outside;
            continue;
        }
        auto it = std::upper_bound(orbit.x.begin(), orbit.x.end(), x);
        std::size_t k = static_cast<std::size_t>(it - orbit.x.begin());
        if (k == orbit.x.size()) --k;
        if (k == 0) k = 1;
        const double x0 = orbit.x[k - 1], x1 = orbit.x[k];
        const double hh = x1 - x0;
        const double t = (x - x0) / hh;
        const cplx a0 = orbit.u[k - 1].A, a1 = orbit.u[k].A;
        const cplx d0 = vector_field(orbit.u[k - 1], m).A * hh;
        const cplx d1 = vector_field(orbit.u[k], m).A * hh;
        const double t2 = t * t, t3 = t2 * t;
        const cplx a = (2 * t3 - 3 * t2 + 1) * a0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * a1 +
                       (t3 - t2) * d1;
        p.eta[i] = 2.0 * std::real(a);
    }
    if (outside > 0)
        p.warnings.push_back(std::to_string(outside) +
                             " grid points outside the orbit support were zero-padded");
    return p;
}

double dominant_wavelength(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 8)
        throw std::invalid_argument("dominant_wavelength needs at least 8 matching samples");
    const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    const std::size_t n = 8 * x.size();
    std::vector<double> data(n, 0.0);
    std::copy(y.begin(), y.end(), data.begin());
    gsl_fft_real_wavetable* wt = gsl_fft_real_wavetable_alloc(n);
    gsl_fft_real_workspace* ws = gsl_fft_real_workspace_alloc(n);
    const int status = gsl_fft_real_transform(data.data(), 1, n, wt, ws);
    gsl_fft_real_wavetable_free(wt);
    gsl_fft_real_workspace_free(ws);
    if (status != GSL_SUCCESS) throw numerical_error("FFT failed", "gsl_fft_real_transform");
    // Half-complex layout: bin k >= 1 has re at 2k-1 and im at 2k.
    auto power = [&](std::size_t k) {
        if (2 * k == n) return data[n - 1] * data[n - 1];
        return data[2 * k - 1] * data[2 * k - 1] + data[2 * k] * data[2 * k];
    };
    std::size_t best = 1;
    for (std::size_t k = 1; k <= n / 2; ++k)
        if (power(k) > power(best)) best = k;
    double kk = static_cast<double>(best);
    if (best > 1 && best < n / 2) {
        const double pm = power(best - 1), p0 = power(best), pp = power(best + 1);
        const double den = pm - 2.0 * p0 + pp;
        if (den != 0.0) kk += 0.5 * (pm - pp) / den;
    }
    return static_cast<double>(n) * dx / kk;
}

}  // namespace ferrohopf
