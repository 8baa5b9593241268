#include "ferrohopf/magnetisation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include <boost/math/special_functions/bernoulli.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include "ferrohopf/errors.hpp"
#include "ferrohopf/hyperbolic.hpp"
#include "json.hpp"

namespace ferrohopf {

namespace {

// GSL aborts on error by default; every call site here checks status codes.
[[maybe_unused]] const bool gsl_handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();

constexpr double langevin_series_cutoff = 1e-3;
constexpr double quad_abs_tol = 1e-12;

// h(x) = L(x)/x and its derivatives up to third order.
struct HJet {
    double h0, h1, h2, h3;
};

HJet langevin_h_jet(double x) {
    if (x < 1.0) {
        // h(x) = sum_{n>=1} a_n x^(2n-2), a_n = 2^(2n) B_2n / (2n)!
        HJet r{0, 0, 0, 0};
        double pow2 = 1.0;
        double fact = 1.0;
        for (int n = 1; n <= 30; ++n) {
            pow2 *= 4.0;
            fact *= (2.0 * n - 1.0) * (2.0 * n);
            const double a = pow2 * boost::math::bernoulli_b2n<double>(n) / fact;
            const int e = 2 * n - 2;
            r.h0 += a * std::pow(x, e);
            if (e >= 1) r.h1 += a * e * std::pow(x, e - 1);
            if (e >= 2) r.h2 += a * e * (e - 1) * std::pow(x, e - 2);
            if (e >= 3) r.h3 += a * e * (e - 1) * (e - 2) * std::pow(x, e - 3);
        }
        return r;
    }
    const double c = hyp::coth(x);
    const double c2 = hyp::csch2(x);
    const double L0 = c - 1.0 / x;
    const double L1 = -c2 + 1.0 / (x * x);
    const double L2 = 2.0 * c2 * c - 2.0 / (x * x * x);
    const double L3 = -4.0 * c2 * c * c - 2.0 * c2 * c2 + 6.0 / (x * x * x * x);
    const double ix = 1.0 / x;
    HJet r;
    r.h0 = L0 * ix;
    r.h1 = L1 * ix - L0 * ix * ix;
    r.h2 = L2 * ix - 2.0 * L1 * ix * ix + 2.0 * L0 * ix * ix * ix;
    r.h3 = L3 * ix - 3.0 * L2 * ix * ix + 6.0 * L1 * ix * ix * ix - 6.0 * L0 * ix * ix * ix * ix;
    return r;
}

double langevin_h(double x) {
    if (x < langevin_series_cutoff) {
        const double x2 = x * x;
        return 1.0 / 3.0 - x2 / 45.0 + 2.0 * x2 * x2 / 945.0;
    }
    return langevin_function(x) / x;
}

template <class F>
double integrate(F&& f, double a, double b) {
    if (b <= a) return 0.0;
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(1000);
    using Fn = std::remove_reference_t<F>;
    gsl_function g;
    g.function = [](double t, void* p) { return (*static_cast<Fn*>(p))(t); };
    g.params = &f;
    double res = 0.0, err = 0.0;
    const int status = gsl_integration_qags(&g, a, b, quad_abs_tol, 0.0, 1000, ws, &res, &err);
    gsl_integration_workspace_free(ws);
    if (status != GSL_SUCCESS)
        throw numerical_error(std::string("M(s) quadrature failed: ") + gsl_strerror(status),
                              "eval_M");
    return res;
}

}  // namespace

struct MagnetisationLaw::Spline {
    gsl_spline* sp = nullptr;
    ~Spline() { gsl_spline_free(sp); }
};

void LawJet::validate() const {
    if (!std::isfinite(mu1) || !std::isfinite(dmu1) || !std::isfinite(ddmu1) ||
        !std::isfinite(dddmu1))
        throw std::invalid_argument("law jet has non-finite entries");
    if (!(mu1 > 1.0)) throw std::invalid_argument("law jet requires mu(1) > 1");
    if (!(mu1 + dmu1 > 0.0))
        throw std::invalid_argument("law jet violates mu(1) + mu'(1) > 0");
}

MagnetisationLaw MagnetisationLaw::constant(double mu) {
    if (!(mu > 1.0)) throw std::invalid_argument("constant law requires mu > 1");
    MagnetisationLaw law;
    law.kind_ = LawKind::constant;
    law.mu_ = mu;
    return law;
}

MagnetisationLaw MagnetisationLaw::langevin(double saturation, double chi0) {
    if (!(saturation > 0.0) || !(chi0 > 0.0))
        throw std::invalid_argument("langevin law requires saturation > 0 and chi0 > 0");
    return langevin_gamma(saturation, 3.0 * chi0 / saturation);
}

MagnetisationLaw MagnetisationLaw::langevin_gamma(double saturation, double gamma) {
    if (!(saturation > 0.0) || !(gamma > 0.0) || !std::isfinite(saturation) ||
        !std::isfinite(gamma))
        throw std::invalid_argument("langevin law requires saturation > 0 and gamma > 0");
    MagnetisationLaw law;
    law.kind_ = LawKind::langevin;
    law.saturation_ = saturation;
    law.gamma_ = gamma;
    jet_at_one(law).validate();
    return law;
}

MagnetisationLaw MagnetisationLaw::tabulated(std::vector<Sample> samples) {
    if (samples.size() < 3) throw std::invalid_argument("tabulated law needs at least 3 samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto [s, mu] = samples[i];
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("tabulated s must be > 0");
        if (!(mu > 1.0) || !std::isfinite(mu))
            throw std::invalid_argument("tabulated law requires mu(s) > 1 at every sample");
        if (i > 0 && !(s > samples[i - 1].first))
            throw std::invalid_argument("tabulated s values must be strictly increasing");
    }
    MagnetisationLaw law;
    law.kind_ = LawKind::tabulated;
    law.samples_ = std::move(samples);
    auto sp = std::make_shared<Spline>();
    const std::size_t n = law.samples_.size();
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = law.samples_[i].first;
        ys[i] = law.samples_[i].second;
    }
    sp->sp = gsl_spline_alloc(gsl_interp_cspline, n);
    if (gsl_spline_init(sp->sp, xs.data(), ys.data(), n) != GSL_SUCCESS)
        throw std::invalid_argument("tabulated law: spline construction failed");
    law.spline_ = std::move(sp);
    // The standing assumption can only be checked when the grid resolves s = 1;
    // otherwise jet_at_one reports the coarse grid when it is requested.
    LawJet jet;
    bool have_jet = true;
    try {
        jet = jet_at_one(law);
    } catch (const std::invalid_argument&) {
        have_jet = false;
    }
    if (have_jet) jet.validate();
    return law;
}

double MagnetisationLaw::spline_value(double s) const {
    if (!spline_) throw std::logic_error("spline_value on a non-tabulated law");
    if (s < samples_.front().first || s > samples_.back().first)
        throw std::domain_error("s outside the tabulated range");
    return gsl_spline_eval(spline_->sp, s, nullptr);
}

double langevin_function(double x) {
    if (std::abs(x) < langevin_series_cutoff) {
        const double x2 = x * x;
        return x * (1.0 / 3.0 - x2 / 45.0 + 2.0 * x2 * x2 / 945.0);
    }
    if (x < 0) return -langevin_function(-x);
    return hyp::coth(x) - 1.0 / x;
}

double eval_mu(const MagnetisationLaw& law, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("eval_mu requires s > 0");
    switch (law.kind()) {
        case LawKind::constant:
            return law.mu();
        case LawKind::langevin:
            // (M_s / s) L(gamma s) = M_s gamma h(gamma s)
            return 1.0 + law.saturation() * law.gamma() * langevin_h(law.gamma() * s);
        case LawKind::tabulated:
            return law.spline_value(s);
    }
    throw std::logic_error("unknown law kind");
}

double eval_M(const MagnetisationLaw& law, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("eval_M requires s > 0");
    switch (law.kind()) {
        case LawKind::constant:
            return 0.5 * law.mu() * s * s;
        case LawKind::langevin:
            return integrate([&](double t) { return t > 0.0 ? t * eval_mu(law, t) : 0.0; }, 0.0, s);
        case LawKind::tabulated: {
            const double s0 = law.samples().front().first;
            if (s > law.samples().back().first)
                throw std::domain_error("eval_M: s beyond the tabulated range");
            const double head = 0.5 * law.samples().front().second * std::pow(std::min(s, s0), 2);
            return head + integrate([&](double t) { return t * law.spline_value(t); }, s0, s);
        }
    }
    throw std::logic_error("unknown law kind");
}

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x,
                                                  int order) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

LawJet jet_at_one(const MagnetisationLaw& law) {
    switch (law.kind()) {
        case LawKind::constant:
            return LawJet::constant(law.mu());
        case LawKind::langevin: {
            const double g = law.gamma();
            const double a = law.saturation() * g;
            const HJet h = langevin_h_jet(g);
            return {1.0 + a * h.h0, a * g * h.h1, a * g * g * h.h2, a * g * g * g * h.h3};
        }
        case LawKind::tabulated: {
            const auto& smp = law.samples();
            std::size_t below = 0, above = 0;
            for (const auto& [s, mu] : smp) {
                if (s < 1.0) ++below;
                if (s > 1.0) ++above;
            }
            if (below < 2 || above < 2)
                throw std::invalid_argument(
                    "tabulated grid does not bracket s = 1 (need two samples on each side)");
            std::vector<std::size_t> idx(smp.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(smp[a].first - 1.0) < std::abs(smp[b].first - 1.0);
            });
            const std::size_t k = std::min<std::size_t>(7, smp.size());
            if (k < 5) throw std::invalid_argument("tabulated grid too coarse near s = 1");
            std::vector<double> xs, ys;
            double spread = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                xs.push_back(smp[idx[i]].first);
                ys.push_back(smp[idx[i]].second);
                spread = std::max(spread, std::abs(xs.back() - 1.0));
            }
            if (spread > 0.5) throw std::invalid_argument("tabulated grid too coarse near s = 1");
            const auto w = fornberg_weights(1.0, xs, 3);
            double d[4] = {0, 0, 0, 0};
            for (int o = 0; o < 4; ++o)
                for (std::size_t i = 0; i < k; ++i) d[o] += w[o][i] * ys[i];
            return {d[0], d[1], d[2], d[3]};
        }
    }
    throw std::logic_error("unknown law kind");
}

LawJet finite_difference_jet(const MagnetisationLaw& law, double h) {
    if (!(h > 0.0) || h >= 1.0 / 7.0) throw std::invalid_argument("finite_difference_jet: bad h");
    std::vector<double> xs, ys;
    for (int i = -6; i <= 6; ++i) {
        xs.push_back(1.0 + i * h);
        ys.push_back(eval_mu(law, 1.0 + i * h));
    }
    const auto w = fornberg_weights(1.0, xs, 3);
    double d[4] = {0, 0, 0, 0};
    for (int o = 0; o < 4; ++o)
        for (std::size_t i = 0; i < xs.size(); ++i) d[o] += w[o][i] * ys[i];
    return {d[0], d[1], d[2], d[3]};
}

MagnetisationLaw parse_law_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed law JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("law JSON must be an object with a string \"kind\"");
    auto number = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_number())
            throw std::invalid_argument(std::string("law JSON: missing numeric \"") + key + "\"");
        return j[key].get<double>();
    };
    const std::string kind = j["kind"];
    if (kind == "constant") return MagnetisationLaw::constant(number("mu"));
    if (kind == "langevin") {
        const double ms = number("saturation");
        if (j.contains("gamma")) return MagnetisationLaw::langevin_gamma(ms, number("gamma"));
        return MagnetisationLaw::langevin(ms, number("chi0"));
    }
    if (kind == "tabulated") {
        if (!j.contains("samples") || !j["samples"].is_array())
            throw std::invalid_argument("law JSON: tabulated law needs a \"samples\" array");
        std::vector<MagnetisationLaw::Sample> smp;
        for (const auto& e : j["samples"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw std::invalid_argument("law JSON: each sample must be [s, mu]");
            smp.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return MagnetisationLaw::tabulated(std::move(smp));
    }
    throw std::invalid_argument("law JSON: unknown kind \"" + kind + "\"");
}

std::string law_to_json(const MagnetisationLaw& law) {
    nlohmann::json j;
    switch (law.kind()) {
        case LawKind::constant:
            j = {{"kind", "constant"}, {"mu", law.mu()}};
            break;
        case LawKind::langevin:
            j = {{"kind", "langevin"}, {"saturation", law.saturation()}, {"gamma", law.gamma()}};
            break;
        case LawKind::tabulated: {
            nlohmann::json s = nlohmann::json::array();
            for (const auto& [x, mu] : law.samples()) s.push_back({x, mu});
            j = {{"kind", "tabulated"}, {"samples", s}};
            break;
        }
    }
    return j.dump();
}

}  // namespace ferrohopf
