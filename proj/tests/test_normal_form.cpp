#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "ferrohopf/errors.hpp"
#include "ferrohopf/hopf_locus.hpp"
#include "ferrohopf/magnetisation.hpp"
#include "ferrohopf/normal_form.hpp"

using namespace ferrohopf;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("finite-depth coefficients match the oracle")
{
    const NormalFormCoeffs a = coeffs_finite_depth_linear(4.0, 3.0);
    CHECK_THAT(a.c1, WithinRel(-0.8971129293133872, 1e-12));
    CHECK_THAT(a.c3, WithinRel(11.672143366210086, 1e-10));
    CHECK(a.source == CoeffSource::finite_depth_linear_law);
    CHECK(a.homoclinic_exists());

    const NormalFormCoeffs b = coeffs_finite_depth_linear(2.5, 1.0);
    CHECK_THAT(b.c1, WithinRel(-1.2040605622429007, 1e-12));
    CHECK_THAT(b.c3, WithinRel(-1.2057458630010217, 1e-10));
    CHECK_FALSE(b.homoclinic_exists());
}

TEST_CASE("finite-depth terms expose the locus parameters")
{
    FiniteDepthTerms t;
    coeffs_finite_depth_linear(4.0, 3.0, &t);
    const HopfPoint h = hopf_point(3.0, LawJet::constant(4.0));
    CHECK_THAT(t.beta0, WithinRel(h.beta0, 1e-15));
    CHECK_THAT(t.gamma0, WithinRel(h.gamma0, 1e-15));
    CHECK_THAT(t.prefactor_base, WithinRel(1.0 / 0.8971129293133872, 1e-12));
}

TEST_CASE("singular denominators are reported by name")
{
    CHECK_THROWS_AS(finite_depth_terms(3.0, 1.0, 1.0, 0.0), numerical_error);
    try {
        finite_depth_terms(3.0, 1.0, 1.0, 0.0);
    } catch (const numerical_error& e) {
        CHECK_FALSE(e.term().empty());
    }
}

TEST_CASE("deep-fluid constant-mu c3 matches the oracle")
{
    struct Row {
        double mu, c3;
    };
    for (const Row r : {Row{2.0, -0.0099451303155006859}, Row{2.5, -0.21486379864991017}, Row{3.0, -1.265625},
                        Row{3.5, -0.53857625627572163}, Row{4.0, 31.912704}, Row{5.0, 1042.5240054869684}}) {
        const DeepFluidResult d = coeffs_deep_fluid(LawJet::constant(r.mu));
        INFO("mu = " << r.mu);
        CHECK(d.coeffs.c1 == -1.0);
        CHECK_THAT(d.coeffs.c3, WithinRel(r.c3, 1e-11));
        CHECK(d.intermediates.residual < 1e-13);
        CHECK(d.intermediates.m == 1.0);
    }
}

TEST_CASE("deep-fluid Langevin c3 matches the oracle")
{
    const DeepFluidResult a = coeffs_deep_fluid(jet_at_one(MagnetisationLaw::langevin_gamma(10.0, 0.3)));
    CHECK_THAT(a.coeffs.c3, WithinRel(-0.0096193854375299854, 1e-8));
    const DeepFluidResult b = coeffs_deep_fluid(jet_at_one(MagnetisationLaw::langevin_gamma(2.0, 3.0)));
    CHECK_THAT(b.coeffs.c3, WithinRel(-0.20282366878276272, 1e-9));
}

TEST_CASE("critical permeability of the deep-fluid constant law")
{
    CHECK_THAT(critical_mu_deep(), WithinAbs(3.5353221654543925, 1e-9));
}

// On the locus, beta0 -> 0 pushes q out and the finite-depth values approach
// the deep-fluid ones.
TEST_CASE("both cases agree in the deep limit")
{
    for (double mu : {2.5, 4.0, 5.0}) {
        const ConsistencyReport r = consistency_deep_vs_finite(mu, {1e-1, 1e-2, 1e-3});
        INFO("mu = " << mu);
        CHECK(r.c1_monotone);
        CHECK(r.c3_monotone);
        CHECK(std::abs(r.rows.back().c1 + 1.0) < 1e-2);
        for (const auto& row : r.rows) CHECK_THAT(invert_locus_beta(row.beta0, LawJet::constant(mu)), WithinRel(row.q, 1e-9));
    }
}

TEST_CASE("region map records singular cells and uses the grid order")
{
    const Axis a1{2.0, 6.0, 5};
    const Axis a2{0.5, 5.0, 4};
    const RegionGrid g = region_map(linear_law_family(), a1, a2, 2);
    REQUIRE(g.cells.size() == 20);
    CHECK(g.at(1, 0).param1 == a1.at(1));
    CHECK(g.at(1, 0).param2 == a2.at(0));
    const RegionGrid h = region_map(linear_law_family(), a1, a2, 1);
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        CHECK(g.cells[i].c1 == h.cells[i].c1);
        CHECK(g.cells[i].c3 == h.cells[i].c3);
    }

    const CoeffFamily bad = [](double x, double) -> NormalFormCoeffs {
        if (x > 0.5) throw numerical_error("boom", "test");
        return {-1.0, 1.0};
    };
    const RegionGrid s = region_map(bad, Axis{0.0, 1.0, 3}, Axis{0.0, 1.0, 1});
    CHECK_FALSE(s.at(0, 0).singular);
    CHECK(s.at(0, 0).exists);
    CHECK(s.at(2, 0).singular);
    CHECK_FALSE(s.at(2, 0).exists);
}

TEST_CASE("langevin saturation threshold")
{
    const Axis gammas{0.01, 3.0, 60};
    CHECK_FALSE(langevin_bifurcates(9.0, gammas));
    CHECK(langevin_bifurcates(11.0, gammas));
    const double mc = critical_saturation_langevin(gammas);
    CHECK(mc > 9.0);
    CHECK(mc < 11.0);
}

TEST_CASE("deep-branch onset of the linear law")
{
    const auto q4 = deep_branch_onset(4.0, 0.5, 5.0);
    REQUIRE(q4.has_value());
    CHECK_THAT(*q4, WithinAbs(2.70, 0.02));
    CHECK_FALSE(deep_branch_onset(3.0, 0.5, 5.0).has_value());
}
