#pragma once

// Relative-permeability laws mu(s) and the magnetisation potential
// M(s) = int_0^s t mu(t) dt.

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ferrohopf {

enum class LawKind { constant, langevin, tabulated };

/// mu and its first three derivatives at s = 1.
struct LawJet {
    double mu1 = 0.0;
    double dmu1 = 0.0;
    double ddmu1 = 0.0;
    double dddmu1 = 0.0;

    /// Throws std::invalid_argument unless mu1 > 1 and mu1 + dmu1 > 0.
    void validate() const;
    static LawJet constant(double mu) { return {mu, 0.0, 0.0, 0.0}; }
};

class MagnetisationLaw {
public:
    using Sample = std::pair<double, double>;

    static MagnetisationLaw constant(double mu);
    /// Langevin law from saturation M_s and initial susceptibility chi0.
    static MagnetisationLaw langevin(double saturation, double chi0);
    /// Langevin law parameterised by (M_s, gamma) with gamma = 3 chi0 / M_s.
    static MagnetisationLaw langevin_gamma(double saturation, double gamma);
    static MagnetisationLaw tabulated(std::vector<Sample> samples);

    LawKind kind() const noexcept { return kind_; }
    double mu() const noexcept { return mu_; }
    double saturation() const noexcept { return saturation_; }
    double chi0() const noexcept { return gamma_ * saturation_ / 3.0; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }

    /// Spline evaluation for tabulated laws; s must lie inside the sample range.
    double spline_value(double s) const;

private:
    struct Spline;
    MagnetisationLaw() = default;

    LawKind kind_ = LawKind::constant;
    double mu_ = 0.0;
    double saturation_ = 0.0;
    double gamma_ = 0.0;
    std::vector<Sample> samples_;
    std::shared_ptr<const Spline> spline_;
};

/// Langevin function L(x) = coth x - 1/x, with a series below x = 1e-3.
double langevin_function(double x);

double eval_mu(const MagnetisationLaw& law, double s);
double eval_M(const MagnetisationLaw& law, double s);
LawJet jet_at_one(const MagnetisationLaw& law);

/// Jet by high-order central differences of eval_mu at spacing h.
/// Independent of the closed forms, used as a cross-check.
LawJet finite_difference_jet(const MagnetisationLaw& law, double h = 0.04);

/// Finite-difference weights (Fornberg) for derivatives 0..order at x0.
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& nodes,
                                                  int order);

/// Parse {"kind": "constant", "mu": 3}, {"kind": "langevin", ...} or
/// {"kind": "tabulated", "samples": [[s, mu], ...]}. Throws std::invalid_argument.
MagnetisationLaw parse_law_json(const std::string& text);
/// Canonical compact JSON text of a law.
std::string law_to_json(const MagnetisationLaw& law);

}  // namespace ferrohopf
