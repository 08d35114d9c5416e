#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracepi/types.hpp"

namespace fracepi {

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coefficients{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Largest x with Gamma(x) < DBL_MAX.
inline constexpr double gamma_overflow_threshold = 171.62437695630272;

}  // namespace detail

/// Gamma function for positive real arguments.
///
/// Throws std::domain_error for x <= 0 and std::overflow_error once the result
/// leaves the double range (x > ~171.62).
inline double gamma_fn(double x) {
    if (!(x > 0.0) || std::isnan(x)) {
        throw std::domain_error("gamma_fn: argument must be positive, got " + std::to_string(x));
    }
    if (x > detail::gamma_overflow_threshold) {
        throw std::overflow_error("gamma_fn: result overflows for x = " + std::to_string(x));
    }
    // Shift small arguments up; Gamma(x) = Gamma(x + 1) / x.
    if (x < 0.5) return gamma_fn(x + 1.0) / x;

    const double z = x - 1.0;
    double series = detail::lanczos_coefficients[0];
    for (std::size_t i = 1; i < detail::lanczos_coefficients.size(); ++i) {
        series += detail::lanczos_coefficients[i] / (z + static_cast<double>(i));
    }
    const double t = z + detail::lanczos_g + 0.5;
    // Split the power so t^(z+1/2) cannot overflow before exp(-t) is applied.
    const double half_power = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * series;
}

namespace detail {

// E_alpha(-x) for x > 0, 0 < alpha < 1, from the completely monotone
// representation E_alpha(-t^alpha) = int_0^inf exp(-r t) K_alpha(r) dr.
inline double mittag_leffler_negative_axis(double alpha, double x) {
    const double t = std::pow(x, 1.0 / alpha);
    const double s = std::sin(alpha * std::numbers::pi);
    const double c = std::cos(alpha * std::numbers::pi);
    auto kernel = [=](double r) {
        if (r <= 0.0) return 0.0;
        const double ra = std::pow(r, alpha);
        return std::exp(-r * t) * (s / std::numbers::pi) * (ra / r) / (ra * ra + 2.0 * ra * c + 1.0);
    };
    boost::math::quadrature::tanh_sinh<double> inner;
    boost::math::quadrature::exp_sinh<double> outer;
    const double tol = 1e-14;
    const double head = inner.integrate(kernel, 0.0, 1.0, tol);
    const double tail = outer.integrate(kernel, 1.0, std::numeric_limits<double>::infinity(), tol);
    return head + tail;
}

}  // namespace detail

/// One-parameter Mittag-Leffler function E_alpha(z) for real |z| <= 30.
///
/// Power series sum_k z^k / Gamma(alpha k + 1), accumulated in extended
/// precision and truncated once terms fall below 1e-16. When the series
/// would cancel catastrophically (large negative z) the integral
/// representation on the negative real axis is used instead.
inline double mittag_leffler_1p(FractionalOrder order, double z) {
    if (!std::isfinite(z) || std::abs(z) > 30.0) {
        throw std::domain_error("mittag_leffler_1p: |z| must not exceed 30");
    }
    const double alpha = order.value();
    if (z == 0.0) return 1.0;

    const long double log_abs_z = std::log(static_cast<long double>(std::abs(z)));
    long double sum = 0.0L;
    long double peak = 0.0L;
    bool past_peak = false;
    for (int k = 0; k < 100000; ++k) {
        const long double log_mag =
            static_cast<long double>(k) * log_abs_z - std::lgamma(static_cast<long double>(alpha) * k + 1.0L);
        const long double mag = std::exp(log_mag);
        const long double term = (z < 0.0 && (k % 2 == 1)) ? -mag : mag;
        sum += term;
        if (mag > peak) {
            peak = mag;
        } else {
            past_peak = true;
        }
        if (past_peak && mag < 1e-16L) break;
    }

    // Cancellation error grows with the largest term; beyond ~1e6 the extended
    // precision sum no longer meets 1e-10 absolute.
    if (z < 0.0 && peak > 1e6L) {
        if (order.is_integer()) return std::exp(z);
        return detail::mittag_leffler_negative_axis(alpha, -z);
    }
    const double result = static_cast<double>(sum);
    if (!std::isfinite(result)) {
        throw std::overflow_error("mittag_leffler_1p: result overflows");
    }
    return result;
}

}  // namespace fracepi
