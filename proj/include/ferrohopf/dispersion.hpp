#pragma once

// Dispersion relations of the linearised spatial-dynamics operator.
//
// An eigenvalue lambda of the operator corresponds to sigma = lambda / beta0.
// On the imaginary axis lambda = i beta0 q, and q solves D(q) = 0 with
//   D(q) = q^2 mu1 (mu1-1)^2 - (alpha0 + q^2 beta0)(qt coth qt + q mu1 coth q),
// qt = m q, m = sqrt(mu1 / (mu1 + mu1')). The general relation is F(sigma) = 0.
// Along sigma = i s the two are linked by
//   F(i s) = D(s) * (mu1 + mu1') m sinh(s) sinh(m s) / mu1.

#include <complex>
#include <vector>

#include "ferrohopf/magnetisation.hpp"

namespace ferrohopf {

/// Dimensionless (beta0, alpha0) with gamma0 = alpha0 beta0 always derived.
class FluidParams {
public:
    FluidParams(double beta0, double alpha0);

    double beta0() const noexcept { return beta0_; }
    double alpha0() const noexcept { return alpha0_; }
    double gamma0() const noexcept { return alpha0_ * beta0_; }

private:
    double beta0_;
    double alpha0_;
};

/// m = sqrt(mu1 / (mu1 + mu1')).
double m_ratio(const LawJet& jet);

double disp_imag(double q, const FluidParams& p, const LawJet& jet);
/// Analytic dD/dq.
double disp_imag_dq(double q, const FluidParams& p, const LawJet& jet);

struct ImaginaryRootSet {
    std::vector<double> roots;
    std::vector<int> multiplicities;

    /// Number of eigenvalue pairs +-i beta0 q counted with multiplicity.
    int pair_count() const;
};

/// Upper bound beyond which D < 0: mu1 (mu1-1)^2 / (beta0 (m + mu1)).
double imag_root_bound(const FluidParams& p, const LawJet& jet);

/// All positive roots of D on (0, q_max]. q_max <= 0 selects the analytic bound.
ImaginaryRootSet imag_roots(const FluidParams& p, const LawJet& jet, double q_max = 0.0);

std::complex<double> disp_complex(std::complex<double> sigma, const FluidParams& p,
                                  const LawJet& jet);
std::complex<double> disp_complex_dsigma(std::complex<double> sigma, const FluidParams& p,
                                         const LawJet& jet);
/// Sum of the magnitudes of the two products in F, a natural scale for |F|.
double disp_complex_scale(std::complex<double> sigma, const FluidParams& p, const LawJet& jet);

/// Factor relating the relations on the imaginary axis: F(i s) = D(s) * factor.
double imag_axis_factor(double s, const LawJet& jet);

/// Newton refinement of a root of F; throws numerical_error after max_iter steps.
std::complex<double> complex_roots_near(std::complex<double> seed, const FluidParams& p,
                                        const LawJet& jet, int max_iter = 100);

}  // namespace ferrohopf
