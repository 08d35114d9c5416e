#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fracepi/special_functions.hpp"
#include "support/oracles.hpp"

using fracepi::FractionalOrder;
using fracepi::gamma_fn;
using fracepi::mittag_leffler_1p;

TEST(Gamma, Factorials) {
    EXPECT_DOUBLE_EQ(gamma_fn(1.0), 1.0);
    EXPECT_NEAR(gamma_fn(5.0), 24.0, 24.0 * 1e-13);
    EXPECT_NEAR(gamma_fn(11.0), 3628800.0, 3628800.0 * 1e-13);
}

TEST(Gamma, HalfMatchesQuadratureOfDefinition) {
    // Gamma(1/2) = int_0^inf t^{-1/2} e^{-t} dt = 2 int_0^inf e^{-u^2} du.
    const double quad = 2.0 * fracepi::testing::simpson([](double u) { return std::exp(-u * u); }, 0.0, 12.0, 4000);
    EXPECT_NEAR(quad, std::sqrt(std::numbers::pi), 1e-13);
    EXPECT_NEAR(gamma_fn(0.5), quad, 1e-12 * quad);
    EXPECT_NEAR(gamma_fn(0.5), 1.7724538509055160, 1e-14);
}

TEST(Gamma, RelativeAccuracyOnUnitToFifty) {
    double worst = 0.0;
    for (int k = 1; k <= 5000; ++k) {
        const double x = 0.01 * k;  // (0, 50]
        const double ref = std::tgamma(x);
        worst = std::max(worst, std::abs(gamma_fn(x) - ref) / ref);
    }
    EXPECT_LE(worst, 1e-12);
    for (double x : {1e-6, 1e-3, 0.1, 0.3, 0.45}) {
        EXPECT_NEAR(gamma_fn(x), std::tgamma(x), 1e-12 * std::tgamma(x)) << x;
    }
}

TEST(Gamma, RejectsNonPositiveAndOverflow) {
    EXPECT_THROW(gamma_fn(0.0), std::domain_error);
    EXPECT_THROW(gamma_fn(-1.5), std::domain_error);
    EXPECT_THROW(gamma_fn(std::nan("")), std::domain_error);
    EXPECT_THROW(gamma_fn(172.0), std::overflow_error);
    EXPECT_NO_THROW(gamma_fn(171.5));
}

TEST(MittagLeffler, IntegerOrderIsExponential) {
    EXPECT_NEAR(mittag_leffler_1p(FractionalOrder(1.0), -1.0), 0.3678794412, 1e-10);
    EXPECT_DOUBLE_EQ(mittag_leffler_1p(FractionalOrder(1.0), 0.0), 1.0);
    for (double z : {-30.0, -12.0, -3.3, 0.7, 5.0, 20.0}) {
        EXPECT_NEAR(mittag_leffler_1p(FractionalOrder(1.0), z), std::exp(z), 1e-10 * std::max(1.0, std::exp(z))) << z;
    }
}

TEST(MittagLeffler, HalfOrderMatchesErfcIdentity) {
    EXPECT_NEAR(mittag_leffler_1p(FractionalOrder(0.5), -1.0), 0.4275835762, 1e-10);
    for (double z = -30.0; z <= 4.0; z += 0.25) {
        const double ref = fracepi::testing::mittag_leffler_half(z);
        EXPECT_NEAR(mittag_leffler_1p(FractionalOrder(0.5), z), ref, 1e-10 * std::max(1.0, ref)) << z;
    }
}

TEST(MittagLeffler, IntegralBranchAgreesWithSeriesWhereBothAreAccurate) {
    for (double alpha : {0.3, 0.6, 0.9, 0.99}) {
        for (double x : {0.5, 2.0, 4.0}) {
            const double series = mittag_leffler_1p(FractionalOrder(alpha), -x);
            const double integral = fracepi::detail::mittag_leffler_negative_axis(alpha, x);
            EXPECT_NEAR(series, integral, 1e-10) << alpha << " " << x;
        }
    }
}

TEST(MittagLeffler, NegativeAxisIsCompletelyMonotone) {
    for (double alpha : {0.5, 0.75, 0.9}) {
        double prev = 1.0;
        for (double x = 0.5; x <= 30.0; x += 0.5) {
            const double v = mittag_leffler_1p(FractionalOrder(alpha), -x);
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(MittagLeffler, GuardsDomain) {
    EXPECT_THROW(mittag_leffler_1p(FractionalOrder(0.5), 31.0), std::domain_error);
    EXPECT_THROW(mittag_leffler_1p(FractionalOrder(0.5), -30.5), std::domain_error);
    EXPECT_THROW(mittag_leffler_1p(FractionalOrder(0.5), 30.0), std::overflow_error);
}

TEST(FractionalOrderType, RejectsOutOfRange) {
    EXPECT_THROW(FractionalOrder(0.0), std::domain_error);
    EXPECT_THROW(FractionalOrder(1.0000001), std::domain_error);
    EXPECT_THROW(FractionalOrder(-0.2), std::domain_error);
    EXPECT_NO_THROW(FractionalOrder(1e-9));
}
