#pragma once

// Truncated normal-form dynamics on the centre manifold.
//
// With P = |A|^2 and K = i(A conj(B) - conj(A) B) (real), the Hamiltonian is
//   H = beta0q K + |B|^2 + H_NF(P, K),
//   H_NF = eps c1 P + eps c2 K + c3 P^2 + c4 P K + c5 K^2 + eps^2 c6 P + eps^2 c7 K,
// and the flow is A_x = dH/d conj(B), B_x = -dH/d conj(A). Missing coefficients
// count as zero. The field is reversible under R(A, B) = (conj A, -conj B).

#include <complex>
#include <string>
#include <vector>

#include "ferrohopf/normal_form.hpp"

namespace ferrohopf {

using cplx = std::complex<double>;

struct ReducedState {
    cplx A{};
    cplx B{};
};

/// R(A, B) = (conj A, -conj B).
ReducedState reverser(const ReducedState& u);
double state_norm(const ReducedState& u);

struct ReducedModel {
    double beta0q = 1.0;
    double eps = 0.0;
    NormalFormCoeffs coeffs;
};

ReducedState vector_field(const ReducedState& u, const ReducedModel& model);
double hamiltonian(const ReducedState& u, const ReducedModel& model);
double invariant_K(const ReducedState& u);

// Integration

struct Trajectory {
    std::vector<double> x;
    std::vector<ReducedState> u;
    bool blew_up = false;
};

/// One step of the two-stage Gauss-Legendre method (order 4, symmetric, symplectic).
ReducedState gl2_step(const ReducedState& u, const ReducedModel& model, double h);

/// Fixed-step integration from x0 to x1 (either direction); the step is shrunk to
/// land exactly on x1. Every stride-th state is recorded, plus the endpoint. The
/// run stops early with blew_up set once the state norm exceeds blowup.
Trajectory integrate(const ReducedState& u0, const ReducedModel& model, double x0, double x1,
                     double step, double blowup = 1e6, int stride = 1);

/// Endpoint difference between runs at step and step/2.
double step_halving_error(const ReducedState& u0, const ReducedModel& model, double x0, double x1,
                          double step);

struct DriftReport {
    double H_drift = 0.0;
    double K_drift = 0.0;
};
DriftReport measure_drift(const Trajectory& tr, const ReducedModel& model);

// Homoclinic orbits

struct AmplitudePrediction {
    double intro_form = 0.0;    // sqrt(-c3 eps / c1)
    double scaling_form = 0.0;  // sqrt(-c1 eps / c3)
};

/// Both leading-order amplitude candidates. Requires c1 < 0, c3 > 0, eps > 0.
AmplitudePrediction predict_amplitude(const ReducedModel& model);

/// Name of the candidate closest to an observed amplitude: "scaling_form" or "intro_form".
std::string closest_candidate(const AmplitudePrediction& pred, double amplitude);

struct ShootingOptions {
    double delta = 1e-6;        // unstable-manifold insertion distance
    double richardson_delta = 1e-7;
    double step = 5e-3;
    int stride = 10;            // output sampling stride in steps
    double horizon = 0.0;       // 0 selects an automatic horizon
    double tail_ratio = 1e-9;   // tails extended until |A| < tail_ratio * max|A|
};

struct HomoclinicOrbit {
    std::vector<double> x;  // symmetric about x = 0
    std::vector<ReducedState> u;
    double eps = 0.0;
    int pulse_count = 1;
    bool symmetric = true;
    int branch = 1;                        // sign of Re A at the symmetry point
    double theta = 0.0;                    // phase on the unstable fibre
    double amplitude = 0.0;                // max |A|
    double decay_rate = 0.0;               // fitted exponential rate of |A|
    double fix_residual = 0.0;             // max(|Im A|, |Re B|) at the symmetry point
    double reversibility_residual = 0.0;   // of the returned samples
    double forward_reflection_residual = 0.0;  // forward continuation vs reflection
    double end_ratio = 0.0;                // max end |A|,|B| over max |A|
    double insertion_sensitivity = 0.0;    // relative amplitude change at the smaller delta
    double H_drift = 0.0;
    double K_drift = 0.0;
};

/// Linear data of the origin: returns kappa (unstable rate) and omega' (rotation).
struct Linearisation {
    double kappa = 0.0;
    double omega = 0.0;
};
/// Throws std::invalid_argument when the origin is not hyperbolic.
Linearisation linearise_origin(const ReducedModel& model);

/// Both symmetric unipulse homoclinics, branch +1 first.
std::vector<HomoclinicOrbit> find_symmetric_homoclinic(const ReducedModel& model,
                                                       const ShootingOptions& opt = {});

/// Symmetric orbit with the given number of |A| maxima. pulses == 1 is the
/// unipulse search (branch +1). Throws not_found_error when the budget is exhausted.
HomoclinicOrbit find_multipulse(const ReducedModel& model, int pulses,
                                const ShootingOptions& opt = {});

// Free-surface profile

struct Profile {
    std::vector<double> x;
    std::vector<double> eta;
    std::vector<std::string> warnings;
};

/// eta = 2 Re A, by cubic Hermite interpolation of the orbit (slopes from the field).
/// Points outside the orbit support are zero-padded with a warning.
Profile synthesize_profile(const HomoclinicOrbit& orbit, const ReducedModel& model,
                           const std::vector<double>& x_grid);

/// Dominant wavelength of a uniformly sampled signal from its real FFT, with
/// parabolic refinement of the peak bin.
double dominant_wavelength(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ferrohopf
