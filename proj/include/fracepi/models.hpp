#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "fracepi/types.hpp"

namespace fracepi {

/// Below this total population the incidence term is taken to be zero.
inline constexpr double empty_population = 1e-12;

/// Rate fractionalization p -> p^alpha; keeps both sides of the system in
/// units of time^-alpha.
inline double effective_rate(double p, FractionalOrder alpha) {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::domain_error("effective_rate: rate must be positive and finite, got " + std::to_string(p));
    }
    return std::pow(p, alpha.value());
}

struct SisParams {
    double recruitment;    // Lambda
    double infection;      // phi (beta in the simulation presets)
    double natural_death;  // nu
    double return_rate;    // omega
    double disease_death;  // eta
    FractionalOrder alpha{1.0};
};

struct SirsParams {
    double recruitment;     // Lambda
    double infection;       // phi
    double natural_death;   // nu
    double recovery;        // kappa
    double disease_death;   // delta
    double immunity_loss;   // gamma
    FractionalOrder alpha{1.0};
};

namespace detail {

inline void require_rate(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("rate '") + name + "' must be positive and finite");
    }
}

}  // namespace detail

inline void validate(const SisParams& p) {
    detail::require_rate(p.recruitment, "recruitment");
    detail::require_rate(p.infection, "infection");
    detail::require_rate(p.natural_death, "natural_death");
    detail::require_rate(p.return_rate, "return_rate");
    detail::require_rate(p.disease_death, "disease_death");
}

inline void validate(const SirsParams& p) {
    detail::require_rate(p.recruitment, "recruitment");
    detail::require_rate(p.infection, "infection");
    detail::require_rate(p.natural_death, "natural_death");
    detail::require_rate(p.recovery, "recovery");
    detail::require_rate(p.disease_death, "disease_death");
    detail::require_rate(p.immunity_loss, "immunity_loss");
}

/// Rates after p -> p^alpha.
struct SisRates {
    double recruitment, infection, natural_death, return_rate, disease_death;

    static SisRates fractionalized(const SisParams& p) {
        validate(p);
        return {effective_rate(p.recruitment, p.alpha), effective_rate(p.infection, p.alpha),
                effective_rate(p.natural_death, p.alpha), effective_rate(p.return_rate, p.alpha),
                effective_rate(p.disease_death, p.alpha)};
    }
    static SisRates raw(const SisParams& p) {
        validate(p);
        return {p.recruitment, p.infection, p.natural_death, p.return_rate, p.disease_death};
    }
    double removal() const noexcept { return disease_death + natural_death + return_rate; }
};

struct SirsRates {
    double recruitment, infection, natural_death, recovery, disease_death, immunity_loss;

    static SirsRates fractionalized(const SirsParams& p) {
        validate(p);
        return {effective_rate(p.recruitment, p.alpha),   effective_rate(p.infection, p.alpha),
                effective_rate(p.natural_death, p.alpha), effective_rate(p.recovery, p.alpha),
                effective_rate(p.disease_death, p.alpha), effective_rate(p.immunity_loss, p.alpha)};
    }
    double removal() const noexcept { return disease_death + recovery + natural_death; }
};

struct SisState {
    double susceptible;
    double infected;

    double total() const noexcept { return susceptible + infected; }
};

struct SirsState {
    double susceptible;
    double infected;
    double recovered;

    double total() const noexcept { return susceptible + infected + recovered; }
};

/// Standard incidence phi * S * I / N, zero on an empty population.
inline double standard_incidence(double infection, double s, double i, double n) noexcept {
    if (n <= empty_population) return 0.0;
    return infection * s * i / n;
}

inline std::array<double, 2> sis_rhs(const SisRates& r, double s, double i) noexcept {
    const double inc = standard_incidence(r.infection, s, i, s + i);
    return {r.recruitment - inc - r.natural_death * s + r.return_rate * i, inc - r.removal() * i};
}

inline std::array<double, 3> sirs_rhs(const SirsRates& r, double s, double i, double rec) noexcept {
    const double inc = standard_incidence(r.infection, s, i, s + i + rec);
    return {r.recruitment - inc - r.natural_death * s + r.immunity_loss * rec, inc - r.removal() * i,
            r.recovery * i - (r.natural_death + r.immunity_loss) * rec};
}

namespace detail {

inline void require_finite_state(std::span<const double> y) {
    for (double v : y) {
        if (!std::isfinite(v)) throw std::domain_error("model state must be finite");
    }
}

}  // namespace detail

/// Fractional SIS field with fractionalized rates.
inline std::array<double, 2> sis_rhs(const SisState& x, const SisParams& p) {
    detail::require_finite_state(std::array{x.susceptible, x.infected});
    return sis_rhs(SisRates::fractionalized(p), x.susceptible, x.infected);
}

/// SIS field with the raw (non-fractionalized) rates; independent of alpha.
inline std::array<double, 2> sis_rhs_legacy(const SisState& x, const SisParams& p) {
    detail::require_finite_state(std::array{x.susceptible, x.infected});
    return sis_rhs(SisRates::raw(p), x.susceptible, x.infected);
}

inline std::array<double, 3> sirs_rhs(const SirsState& x, const SirsParams& p) {
    detail::require_finite_state(std::array{x.susceptible, x.infected, x.recovered});
    return sirs_rhs(SirsRates::fractionalized(p), x.susceptible, x.infected, x.recovered);
}

/// Solver adapters. Rates are fractionalized once at construction.
class SisField {
public:
    explicit SisField(const SisParams& p) : rates_(SisRates::fractionalized(p)) {}
    static SisField legacy(const SisParams& p) { return SisField(SisRates::raw(p)); }

    std::size_t dimension() const noexcept { return 2; }
    void operator()(double, std::span<const double> y, std::span<double> dy) const noexcept {
        const auto v = sis_rhs(rates_, y[0], y[1]);
        dy[0] = v[0];
        dy[1] = v[1];
    }
    const SisRates& rates() const noexcept { return rates_; }

private:
    explicit SisField(const SisRates& r) : rates_(r) {}
    SisRates rates_;
};

class SirsField {
public:
    explicit SirsField(const SirsParams& p) : rates_(SirsRates::fractionalized(p)) {}

    std::size_t dimension() const noexcept { return 3; }
    void operator()(double, std::span<const double> y, std::span<double> dy) const noexcept {
        const auto v = sirs_rhs(rates_, y[0], y[1], y[2]);
        dy[0] = v[0];
        dy[1] = v[1];
        dy[2] = v[2];
    }
    const SirsRates& rates() const noexcept { return rates_; }

private:
    SirsRates rates_;
};

}  // namespace fracepi
