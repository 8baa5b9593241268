#pragma once

// Chebyshev collocation of the linearised operator on the two strips
// y in [0, 1/beta0] (primed variables) and y in [-1/beta0, 0], with the
// boundary operator and the side/integral constraints imposed on selected rows.
//
// Unknown layout (4N + 3 entries):
//   [eta, omega, tau'(N), zeta'(N), tau(N), zeta(N), nu]
// Upper-strip node 0 is the top y = 1/beta0 and node N-1 is y = 0; lower-strip
// node 0 is y = 0 and node N-1 is the bottom. nu is a multiplier that carries the
// zeta integral constraint. The eigenproblem is the pencil A v = lambda M v, with
// M the identity on evolution rows and zero on constraint rows.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ferrohopf/dispersion.hpp"
#include "ferrohopf/magnetisation.hpp"

namespace ferrohopf {

/// Chebyshev-Lobatto nodes on [-1, 1] (descending), differentiation matrix and
/// Clenshaw-Curtis weights.
struct Chebyshev {
    Eigen::VectorXd x;
    Eigen::MatrixXd D;
    Eigen::VectorXd w;
};
Chebyshev chebyshev(int N);

struct DiscreteEigenproblem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd M;
    int N = 0;
    double beta0 = 0.0;
    double alpha0 = 0.0;
    LawJet jet;
    /// Rows carrying constraints instead of evolution equations.
    std::vector<int> constraint_rows;

    // Offsets into the unknown vector.
    int eta() const { return 0; }
    int omega() const { return 1; }
    int tau_up(int i) const { return 2 + i; }
    int zeta_up(int i) const { return 2 + N + i; }
    int tau_lo(int i) const { return 2 + 2 * N + i; }
    int zeta_lo(int i) const { return 2 + 3 * N + i; }
    int nu() const { return 2 + 4 * N; }
    int size() const { return 4 * N + 3; }

    /// Depth coordinate of upper / lower node i.
    std::vector<double> y_up() const;
    std::vector<double> y_lo() const;
};

inline constexpr int min_nodes = 16;

DiscreteEigenproblem assemble(const FluidParams& p, const LawJet& jet, int N);

struct SpectralWindow {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -10.0;
    double im_max = 10.0;

    bool contains(std::complex<double> z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
};

struct SpectralEigenvalue {
    std::complex<double> lambda;
    double residual = 0.0;            // relative residual on the evolution rows
    double constraint_residual = 0.0; // max |row . v| over constraint rows, v normalised
    double dispersion_residual = 0.0; // |F(lambda/beta0)| over its term scale
    Eigen::VectorXcd vector;
};

inline constexpr double spectral_residual_tol = 1e-8;

/// Finite eigenvalues in the window with residual below the filter tolerance,
/// sorted by imaginary part then real part.
std::vector<SpectralEigenvalue> spectrum(const DiscreteEigenproblem& problem,
                                         const SpectralWindow& window);

struct ConvergenceRow {
    int N = 0;
    std::vector<double> errors;  // per transcendental root, |lambda_h - i beta0 q|
    double max_error = 0.0;
    bool resolved = false;       // max_error below resolved_tol
};

struct ConvergenceTable {
    std::vector<double> roots;  // q values from imag_roots
    std::vector<ConvergenceRow> rows;
    double resolved_tol = 1e-6;
    double plateau = 1e-9;
    /// Errors decrease from row to row until they reach the roundoff plateau.
    bool monotone_to_plateau = false;
};

ConvergenceTable convergence_study(const FluidParams& p, const LawJet& jet,
                                   const std::vector<int>& N_list, int workers = 1);

}  // namespace ferrohopf
