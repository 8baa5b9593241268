#pragma once

// The Hamiltonian-Hopf curve C = {(beta_HH(q), alpha_HH(q)) : q > 0}, where two
// pairs of imaginary eigenvalues collide at +-i beta0 q.

#include <vector>

#include "ferrohopf/dispersion.hpp"
#include "ferrohopf/magnetisation.hpp"

namespace ferrohopf {

struct HopfPoint {
    double q = 0.0;
    double beta0 = 0.0;
    double alpha0 = 0.0;
    double gamma0 = 0.0;
    double qtilde = 0.0;

    FluidParams params() const { return FluidParams(beta0, alpha0); }
};

/// The two building blocks T1, T2 of the locus, exposed for testing.
struct LocusTerms {
    double T1 = 0.0;
    double T2 = 0.0;
};
LocusTerms locus_terms(double q, const LawJet& jet);

HopfPoint hopf_point(double q, const LawJet& jet);

/// Locus points for a strictly positive, increasing grid.
std::vector<HopfPoint> trace_locus(const LawJet& jet, const std::vector<double>& q_grid);

/// Deep-fluid limit of q beta_HH(q): mu1 (mu1-1)^2 / (2 (m + mu1)).
double locus_deep_limit(const LawJet& jet);

/// Solve beta_HH(q) = beta0 for q. beta_HH is decreasing; throws numerical_error
/// when beta0 is outside (0, beta_HH(0+)).
double invert_locus_beta(double beta0, const LawJet& jet);

}  // namespace ferrohopf
