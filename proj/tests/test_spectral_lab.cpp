#include <cmath>
#include <complex>
#include <vector>

#include "catch_amalgamated.hpp"
#include "ferrohopf/dispersion.hpp"
#include "ferrohopf/hopf_locus.hpp"
#include "ferrohopf/spectral_lab.hpp"

using namespace ferrohopf;
using Catch::Matchers::WithinAbs;

TEST_CASE("chebyshev differentiation and quadrature are exact on polynomials")
{
    const Chebyshev c = chebyshev(17);
    Eigen::VectorXd f(17), df(17);
    for (int i = 0; i < 17; ++i) {
        const double x = c.x[i];
        f[i] = std::pow(x, 7) - 2 * x * x + 1;
        df[i] = 7 * std::pow(x, 6) - 4 * x;
    }
    CHECK((c.D * f - df).cwiseAbs().maxCoeff() < 1e-11);
    CHECK_THAT(c.w.dot(f), WithinAbs(-4.0 / 3.0 + 2.0, 1e-13));
    CHECK_THAT(c.w.sum(), WithinAbs(2.0, 1e-14));
}

TEST_CASE("assembled pencil has the documented shape")
{
    const DiscreteEigenproblem P = assemble(FluidParams(0.5, 0.1), LawJet::constant(3.0), 20);
    CHECK(P.size() == 83);
    CHECK(P.A.rows() == 83);
    CHECK(P.constraint_rows.size() == 7);
    for (int r : P.constraint_rows) CHECK(P.M.row(r).isZero());
    CHECK(P.y_up().front() == 2.0);
    CHECK(std::abs(P.y_up().back()) < 1e-15);
    CHECK_THROWS(assemble(FluidParams(0.5, 0.1), LawJet::constant(3.0), 8));
}

TEST_CASE("collocation eigenvalues match the transcendental roots")
{
    const FluidParams fp(0.5, 0.1);
    const LawJet jet{3.0, 0.5, 0.0, 0.0};
    const auto roots = imag_roots(fp, jet).roots;
    REQUIRE(roots.size() == 2);
    const auto ev = spectrum(assemble(fp, jet, 48), SpectralWindow{-0.5, 0.5, -5.0, 5.0});
    for (double q : roots) {
        double best = 1e300;
        for (const auto& e : ev) best = std::min(best, std::abs(e.lambda - std::complex<double>(0.0, fp.beta0() * q)));
        CHECK(best < 1e-6);
    }
    for (const auto& e : ev) {
        CHECK(e.residual < spectral_residual_tol);
        CHECK(e.dispersion_residual < 1e-4);
    }
}

TEST_CASE("complex quadruple below the locus is resolved")
{
    const LawJet jet = LawJet::constant(3.0);
    const HopfPoint h = hopf_point(1.0, jet);
    const FluidParams fp(h.beta0, h.alpha0 + 0.02);
    const auto ev = spectrum(assemble(fp, jet, 40), SpectralWindow{-1.0, 1.0, -4.0, 4.0});
    const std::complex<double> sigma = complex_roots_near({0.05, 1.0}, fp, jet);
    const std::complex<double> lam = fp.beta0() * sigma;
    for (const std::complex<double> t : {lam, std::conj(lam), -lam, -std::conj(lam)}) {
        double best = 1e300;
        for (const auto& e : ev) best = std::min(best, std::abs(e.lambda - t));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("convergence table")
{
    const ConvergenceTable t = convergence_study(FluidParams(0.5, 0.1), LawJet::constant(3.0), {16, 24, 32, 48}, 2);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows.back().resolved);
    CHECK(t.monotone_to_plateau);
    CHECK_THROWS(convergence_study(FluidParams(0.5, 0.1), LawJet::constant(3.0), {32, 16}));
}
