#pragma once

// Normal-form coefficients c1, c3 from the two closed-form cases (constant mu at
// finite depth on the Hopf locus, and general laws in the deep-fluid limit), plus
// sign-region mapping over parameter grids.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ferrohopf/magnetisation.hpp"

namespace ferrohopf {

enum class CoeffSource { finite_depth_linear_law, deep_fluid_general_law, user };

std::string to_string(CoeffSource s);

struct NormalFormCoeffs {
    double c1 = 0.0;
    double c3 = 0.0;
    std::optional<double> c2, c4, c5, c6, c7;
    CoeffSource source = CoeffSource::user;

    /// Leading-order existence of homoclinic solutions: c1 < 0 and c3 > 0.
    bool homoclinic_exists() const { return c1 < 0.0 && c3 > 0.0; }
};

/// Pieces of the constant-mu finite-depth formula.
struct FiniteDepthTerms {
    double beta0 = 0.0;
    double gamma0 = 0.0;
    double prefactor_base = 0.0;  // 1 + (mu/beta0) kappa (q tanh q - 1) sech^2 q
    double denominator = 0.0;     // 2 q beta0 kappa mu tanh 2q - gamma0 - 4 q^2 beta0^2
    double t_cosh = 0.0;          // the cosh 2q / cosh^2 q group
    double t_sech4 = 0.0;         // the sech^4 q / gamma0 group
    double t_cosech = 0.0;        // the cosech 2q group
};

/// Evaluate the constant-mu finite-depth groups at arbitrary (beta0, gamma0). Throws
/// numerical_error naming the term when a denominator is within 1e-12 of zero.
FiniteDepthTerms finite_depth_terms(double mu, double q, double beta0, double gamma0);

/// Constant-mu coefficients with (beta0, gamma0) taken from the Hopf locus at q.
NormalFormCoeffs coeffs_finite_depth_linear(double mu, double q);
NormalFormCoeffs coeffs_finite_depth_linear(double mu, double q, FiniteDepthTerms* terms);

struct DeepFluidIntermediates {
    double s = 0.0;
    double m = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    /// c3 groups in order: 3s^4/4, the -4s^5 term, the s^6 polynomial,
    /// the m s^7 group, the a1 group, the a2 group.
    std::array<double, 6> groups{};
    /// Relative residual of the 2x2 solve.
    double residual = 0.0;
};

struct DeepFluidResult {
    NormalFormCoeffs coeffs;
    DeepFluidIntermediates intermediates;
};

DeepFluidResult coeffs_deep_fluid(const LawJet& jet);

// Region maps

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    /// Inclusive uniform grid; count == 1 gives lo.
    double at(int i) const;
};

struct RegionCell {
    double param1 = 0.0;
    double param2 = 0.0;
    double c1 = 0.0;
    double c3 = 0.0;
    bool exists = false;
    bool singular = false;
    std::string note;
};

struct RegionGrid {
    Axis axis1, axis2;
    std::vector<RegionCell> cells;  // param1 outer, param2 inner

    const RegionCell& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * axis2.count + j]; }
};

using CoeffFamily = std::function<NormalFormCoeffs(double, double)>;

/// Evaluate a family over the grid with the given number of worker threads.
/// Singular points are recorded in the cell rather than aborting the sweep.
RegionGrid region_map(const CoeffFamily& family, const Axis& a1, const Axis& a2, int workers = 1);

/// (mu, q) -> constant-mu finite-depth coefficients.
CoeffFamily linear_law_family();
/// (M_s, gamma) -> deep-fluid coefficients of the Langevin law.
CoeffFamily langevin_deep_family();

// Cross-validation between the two cases

struct ConsistencyRow {
    double beta0 = 0.0;
    double q = 0.0;
    double c1 = 0.0;
    double c3 = 0.0;
    double c1_gap = 0.0;
    double c3_gap = 0.0;
    double c1_order = 0.0;  // log-log slope versus the previous row, 0 on the first
    double c3_order = 0.0;
};

struct ConsistencyReport {
    double mu = 0.0;
    double deep_c1 = 0.0;
    double deep_c3 = 0.0;
    std::vector<ConsistencyRow> rows;
    bool c1_monotone = false;
    bool c3_monotone = false;
    /// Gaps below this are treated as resolved to roundoff in the monotonicity flags.
    double roundoff_floor = 0.0;
};

ConsistencyReport consistency_deep_vs_finite(double mu, const std::vector<double>& beta0_sequence);

// Thresholds read off the sign maps

/// Root of the deep-fluid c3 along constant-mu jets inside [lo, hi].
double critical_mu_deep(double lo = 2.0, double hi = 5.0);

/// Whether any gamma on the axis gives existence for the Langevin law with saturation M.
bool langevin_bifurcates(double saturation, const Axis& gamma_axis);

/// Smallest saturation in [lo, hi] at which langevin_bifurcates holds, by bisection
/// to the given tolerance.
double critical_saturation_langevin(const Axis& gamma_axis, double lo = 2.0, double hi = 30.0,
                                    double tol = 1e-3);

/// Lower edge of the finite-depth existence component connected to q_hi for the
/// constant-mu law (the deep branch). Empty when q_hi itself has no existence.
std::optional<double> deep_branch_onset(double mu, double q_lo, double q_hi, int scan = 400);

}  // namespace ferrohopf
