#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fracepi/models.hpp"
#include "support/oracles.hpp"

using namespace fracepi;
using fracepi::testing::Draws;

namespace {

const SisParams sis_disease_free{0.01, 0.06, 0.01, 0.02, 0.2, FractionalOrder(1.0)};
const SisParams sis_endemic{0.01, 0.45, 0.01, 0.2, 0.05, FractionalOrder(1.0)};
const SirsParams sirs_disease_free{0.01, 0.06, 0.01, 0.3, 0.15, 0.02, FractionalOrder(1.0)};
const SirsParams sirs_endemic{0.01, 0.5, 0.01, 0.2, 0.015, 0.02, FractionalOrder(1.0)};

template <class P>
P with_alpha(P p, double alpha) {
    p.alpha = FractionalOrder(alpha);
    return p;
}

}  // namespace

TEST(EffectiveRate, Values) {
    EXPECT_DOUBLE_EQ(effective_rate(0.01, FractionalOrder(1.0)), 0.01);
    EXPECT_NEAR(effective_rate(0.01, FractionalOrder(0.5)), 0.1, 1e-15);
    EXPECT_NEAR(effective_rate(0.23, FractionalOrder(0.9)), std::exp(0.9 * std::log(0.23)), 1e-15);
    EXPECT_NEAR(effective_rate(0.23, FractionalOrder(0.9)), 0.266413, 1e-6);
    EXPECT_THROW(effective_rate(0.0, FractionalOrder(0.9)), std::domain_error);
    EXPECT_THROW(effective_rate(-0.1, FractionalOrder(0.9)), std::domain_error);
}

TEST(SisRhs, DiseaseFreePointIsStationary) {
    for (double alpha : {0.6, 0.9, 1.0}) {
        const auto p = with_alpha(sis_endemic, alpha);
        const double s = effective_rate(p.recruitment, p.alpha) / effective_rate(p.natural_death, p.alpha);
        const auto f = sis_rhs(SisState{s, 0.0}, p);
        EXPECT_NEAR(f[0], 0.0, 1e-17);
        EXPECT_EQ(f[1], 0.0);
    }
}

TEST(SisRhs, HandEvaluation) {
    const auto f = sis_rhs(SisState{0.95, 0.05}, sis_disease_free);
    EXPECT_NEAR(f[0], -0.00135, 1e-15);
    EXPECT_NEAR(f[1], -0.00865, 1e-15);
}

TEST(SisRhs, VanishesAtEndemicRoot) {
    const auto root = fracepi::testing::damped_newton(
        [](const std::vector<double>& x) { return fracepi::testing::sis_longhand(0.01, 0.45, 0.01, 0.2, 0.05, x[0], x[1]); },
        {0.3, 0.2});
    EXPECT_NEAR(root[0], 0.1857143, 1e-7);
    EXPECT_NEAR(root[1], 0.1357143, 1e-7);
    const auto f = sis_rhs(SisState{root[0], root[1]}, sis_endemic);
    EXPECT_NEAR(f[0], 0.0, 1e-7);
    EXPECT_NEAR(f[1], 0.0, 1e-7);
}

TEST(SisRhs, EmptyPopulationHasNoIncidence) {
    const auto f = sis_rhs(SisState{0.0, 0.0}, sis_endemic);
    EXPECT_DOUBLE_EQ(f[0], 0.01);
    EXPECT_DOUBLE_EQ(f[1], 0.0);
    const auto g = sis_rhs(SisState{1e-13, 0.0}, sis_endemic);
    EXPECT_TRUE(std::isfinite(g[0]));
}

TEST(SisRhs, RejectsNonFiniteState) {
    EXPECT_THROW(sis_rhs(SisState{std::nan(""), 0.1}, sis_endemic), std::domain_error);
    EXPECT_THROW(sirs_rhs(SirsState{0.1, INFINITY, 0.0}, sirs_endemic), std::domain_error);
    EXPECT_THROW(sis_rhs(SisState{0.5, 0.5}, SisParams{0.01, -0.1, 0.01, 0.2, 0.05}), std::invalid_argument);
}

TEST(SisRhsLegacy, MatchesFractionalFieldAtIntegerOrder) {
    Draws draws(11);
    for (int k = 0; k < 100; ++k) {
        const auto p = draws.sis(1.0);
        const SisState x{draws.uniform(0.0, 2.0), draws.uniform(0.0, 2.0)};
        const auto a = sis_rhs(x, p);
        const auto b = sis_rhs_legacy(x, p);
        EXPECT_NEAR(a[0], b[0], 1e-14);
        EXPECT_NEAR(a[1], b[1], 1e-14);
    }
}

TEST(SisRhsLegacy, IndependentOfAlpha) {
    for (double alpha : {0.5, 0.9, 1.0}) {
        const auto f = sis_rhs_legacy(SisState{0.95, 0.05}, with_alpha(sis_disease_free, alpha));
        EXPECT_NEAR(f[0], -0.00135, 1e-15);
        EXPECT_NEAR(f[1], -0.00865, 1e-15);
    }
    const auto g = sis_rhs_legacy(SisState{1.0, 0.0}, with_alpha(sis_disease_free, 0.7));
    EXPECT_NEAR(g[0], 0.0, 1e-17);
    EXPECT_EQ(g[1], 0.0);
}

TEST(SirsRhs, DiseaseFreePointIsStationary) {
    for (double alpha : {0.6, 0.95}) {
        const auto p = with_alpha(sirs_disease_free, alpha);
        const double s = effective_rate(p.recruitment, p.alpha) / effective_rate(p.natural_death, p.alpha);
        const auto f = sirs_rhs(SirsState{s, 0.0, 0.0}, p);
        EXPECT_NEAR(f[0], 0.0, 1e-17);
        EXPECT_EQ(f[1], 0.0);
        EXPECT_EQ(f[2], 0.0);
    }
}

TEST(SirsRhs, HandEvaluation) {
    const auto f = sirs_rhs(SirsState{0.95, 0.05, 0.0}, sirs_disease_free);
    EXPECT_NEAR(f[0], -0.00235, 1e-15);
    EXPECT_NEAR(f[1], -0.02015, 1e-15);
    EXPECT_NEAR(f[2], 0.015, 1e-15);
}

TEST(SirsRhs, VanishesAtEndemicRoot) {
    const auto root = fracepi::testing::damped_newton(
        [](const std::vector<double>& x) { return fracepi::testing::sirs_integer_field(sirs_endemic, x[0], x[1], x[2]); },
        {0.4, 0.1, 0.4});
    // Closed form: (0.4062807, 0.0647694, 0.4317959).
    EXPECT_NEAR(root[0], 0.4062807, 1e-7);
    EXPECT_NEAR(root[1], 0.0647694, 1e-7);
    EXPECT_NEAR(root[2], 0.4317959, 1e-7);
    const auto f = sirs_rhs(SirsState{root[0], root[1], root[2]}, sirs_endemic);
    for (double v : f) EXPECT_NEAR(v, 0.0, 1e-7);
}

TEST(ModelProperties, TotalPopulationIdentities) {
    Draws draws(23);
    for (int k = 0; k < 1000; ++k) {
        const double alpha = draws.uniform(0.3, 1.0);
        const auto p = draws.sis(alpha);
        const SisState x{draws.uniform(0.0, 3.0), draws.uniform(0.0, 3.0)};
        const auto f = sis_rhs(x, p);
        const auto r = SisRates::fractionalized(p);
        const double expected = r.recruitment - r.disease_death * x.infected - r.natural_death * x.total();
        EXPECT_NEAR(f[0] + f[1], expected, 1e-14);

        const auto q = draws.sirs(alpha);
        const SirsState y{draws.uniform(0.0, 3.0), draws.uniform(0.0, 3.0), draws.uniform(0.0, 3.0)};
        const auto g = sirs_rhs(y, q);
        const auto rr = SirsRates::fractionalized(q);
        const double expected3 = rr.recruitment - rr.disease_death * y.infected - rr.natural_death * y.total();
        EXPECT_NEAR(g[0] + g[1] + g[2], expected3, 1e-14);
    }
}

TEST(ModelProperties, InfectionFreeBoundaryIsInvariant) {
    Draws draws(5);
    for (int k = 0; k < 200; ++k) {
        const double alpha = draws.uniform(0.3, 1.0);
        EXPECT_EQ(sis_rhs(SisState{draws.uniform(0.0, 3.0), 0.0}, draws.sis(alpha))[1], 0.0);
        EXPECT_EQ(sis_rhs_legacy(SisState{draws.uniform(0.0, 3.0), 0.0}, draws.sis(alpha))[1], 0.0);
        EXPECT_EQ(sirs_rhs(SirsState{draws.uniform(0.0, 3.0), 0.0, draws.uniform(0.0, 3.0)}, draws.sirs(alpha))[1], 0.0);
    }
}

TEST(ModelProperties, IntegerOrderSirsMatchesClassicalField) {
    Draws draws(31);
    for (int k = 0; k < 100; ++k) {
        const auto p = draws.sirs(1.0);
        const SirsState x{draws.uniform(0.0, 2.0), draws.uniform(0.0, 2.0), draws.uniform(0.0, 2.0)};
        const auto f = sirs_rhs(x, p);
        const auto ref = fracepi::testing::sirs_integer_field(p, x.susceptible, x.infected, x.recovered);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(f[i], ref[i], 1e-14);
    }
}

TEST(ModelProperties, IncidenceIsBounded) {
    Draws draws(41);
    for (int k = 0; k < 500; ++k) {
        const double phi = draws.rate();
        const double s = draws.uniform(0.0, 5.0), i = draws.uniform(0.0, 5.0), r = draws.uniform(0.0, 5.0);
        const double inc2 = standard_incidence(phi, s, i, s + i);
        EXPECT_GE(inc2, 0.0);
        EXPECT_LE(inc2, phi * std::min(s, i) * (1.0 + 1e-15));
        const double inc3 = standard_incidence(phi, s, i, s + i + r);
        EXPECT_GE(inc3, 0.0);
        EXPECT_LE(inc3, phi * std::min(s, i) * (1.0 + 1e-15));
    }
}

TEST(SolverAdapters, MatchPublicFields) {
    const auto p = with_alpha(sirs_endemic, 0.9);
    const SirsField field(p);
    const std::vector<double> y{0.5, 0.2, 0.3};
    std::vector<double> dy(3);
    field(0.0, y, dy);
    const auto ref = sirs_rhs(SirsState{0.5, 0.2, 0.3}, p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(dy[i], ref[i]);

    const auto q = with_alpha(sis_endemic, 0.8);
    const auto legacy = SisField::legacy(q);
    std::vector<double> z{0.6, 0.1}, dz(2);
    legacy(0.0, z, dz);
    const auto lref = sis_rhs_legacy(SisState{0.6, 0.1}, q);
    EXPECT_EQ(dz[0], lref[0]);
    EXPECT_EQ(dz[1], lref[1]);
}
