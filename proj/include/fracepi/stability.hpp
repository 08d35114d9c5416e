#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracepi/models.hpp"
#include "fracepi/types.hpp"

namespace fracepi {

// ---------------------------------------------------------------------------
// Small dense matrices and characteristic polynomials
// ---------------------------------------------------------------------------

class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) : SquareMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != n_) throw std::invalid_argument("SquareMatrix: ragged initializer");
            std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
            ++i;
        }
    }

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    double trace() const noexcept {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
        return t;
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Monic characteristic polynomial lambda^d + c[0] lambda^(d-1) + ... + c[d-1].
/// Degree 2 stores (a1, a2); degree 3 stores (w1, w2, w3).
struct CharPoly {
    std::vector<double> coefficients;

    std::size_t degree() const noexcept { return coefficients.size(); }
    double operator[](std::size_t i) const { return coefficients.at(i); }

    std::complex<double> evaluate(std::complex<double> x) const {
        std::complex<double> acc = 1.0;
        for (double c : coefficients) acc = acc * x + c;
        return acc;
    }
    std::complex<double> derivative(std::complex<double> x) const {
        const std::size_t d = degree();
        std::complex<double> acc = static_cast<double>(d);
        for (std::size_t i = 0; i + 1 < d; ++i) acc = acc * x + static_cast<double>(d - 1 - i) * coefficients[i];
        return acc;
    }
};

inline CharPoly char_poly(const SquareMatrix& m) {
    if (m.size() == 2) {
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        return {{-m.trace(), det}};
    }
    if (m.size() == 3) {
        const double minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
                              (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
        const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        return {{-m.trace(), minors, -det}};
    }
    throw std::invalid_argument("char_poly: matrix must be 2x2 or 3x3, got " + std::to_string(m.size()));
}

// ---------------------------------------------------------------------------
// Eigenvalues
// ---------------------------------------------------------------------------

struct EigenSet {
    std::vector<std::complex<double>> values;
};

namespace detail {

inline void quadratic_roots(double b, double c, std::vector<std::complex<double>>& out) {
    const double disc = b * b - 4.0 * c;
    if (disc >= 0.0) {
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (q == 0.0) {
            out.emplace_back(0.0, 0.0);
            out.emplace_back(0.0, 0.0);
        } else {
            out.emplace_back(q, 0.0);
            out.emplace_back(c / q, 0.0);
        }
    } else {
        const double re = -0.5 * b;
        const double im = 0.5 * std::sqrt(-disc);
        out.emplace_back(re, im);
        out.emplace_back(re, -im);
    }
}

inline double polish_real_root(const CharPoly& p, double r) {
    const double f = p.evaluate(r).real();
    const double df = p.derivative(r).real();
    if (df == 0.0 || !std::isfinite(df)) return r;
    const double candidate = r - f / df;
    return std::abs(p.evaluate(candidate).real()) <= std::abs(f) ? candidate : r;
}

inline void cubic_roots(const CharPoly& p, std::vector<std::complex<double>>& out) {
    const double w1 = p[0], w2 = p[1], w3 = p[2];
    // lambda = x - w1/3 gives x^3 + a x + b.
    const double shift = w1 / 3.0;
    const double a = w2 - w1 * w1 / 3.0;
    const double b = 2.0 * w1 * w1 * w1 / 27.0 - w1 * w2 / 3.0 + w3;
    const double half_b = 0.5 * b;
    const double third_a = a / 3.0;
    const double delta = half_b * half_b + third_a * third_a * third_a;

    if (delta > 0.0) {
        const double sq = std::sqrt(delta);
        // Choose the larger-magnitude branch first to avoid cancellation.
        const double u = std::cbrt(-half_b + (half_b <= 0.0 ? sq : -sq));
        const double v = (u != 0.0) ? -third_a / u : 0.0;
        const double real = polish_real_root(p, u + v - shift);
        out.emplace_back(real, 0.0);
        // Deflate: p(lambda) = (lambda - real)(lambda^2 + c1 lambda + c2).
        const double c1 = w1 + real;
        const double c2 = w2 + real * c1;
        quadratic_roots(c1, c2, out);
        return;
    }
    if (a == 0.0) {
        for (int k = 0; k < 3; ++k) out.emplace_back(-shift, 0.0);
        return;
    }
    const double m = 2.0 * std::sqrt(-third_a);
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
        const double x = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
        out.emplace_back(polish_real_root(p, x - shift), 0.0);
    }
}

}  // namespace detail

/// Roots of a degree-2 or degree-3 characteristic polynomial.
inline EigenSet eigenvalues(const CharPoly& p) {
    EigenSet e;
    if (p.degree() == 2) {
        detail::quadratic_roots(p[0], p[1], e.values);
    } else if (p.degree() == 3) {
        detail::cubic_roots(p, e.values);
    } else {
        throw std::invalid_argument("eigenvalues: characteristic polynomial must have degree 2 or 3");
    }
    return e;
}

inline double max_residual(const CharPoly& p, const EigenSet& e) {
    double worst = 0.0;
    for (auto z : e.values) worst = std::max(worst, std::abs(p.evaluate(z)));
    return worst;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Classification { LocallyAsymptoticallyStable, Unstable, Inconclusive };

inline const char* to_string(Classification c) noexcept {
    switch (c) {
        case Classification::LocallyAsymptoticallyStable:
            return "LocallyAsymptoticallyStable";
        case Classification::Unstable:
            return "Unstable";
        case Classification::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

struct StabilityVerdict {
    Classification classification = Classification::Inconclusive;
    std::string rule_fired;
    /// min_i |arg lambda_i| - alpha pi / 2, when eigenvalues were computed.
    std::optional<double> margin;
    std::optional<double> discriminant;
    /// Direct eigenvalue-angle verdict attached when the rule is inconclusive.
    std::optional<Classification> matignon_cross_check;

    bool stable() const noexcept { return classification == Classification::LocallyAsymptoticallyStable; }
};

inline double matignon_margin(const EigenSet& eigs, FractionalOrder alpha) {
    double min_arg = std::numbers::pi;
    for (auto z : eigs.values) min_arg = std::min(min_arg, std::abs(std::arg(z)));
    return min_arg - alpha.value() * std::numbers::pi / 2.0;
}

/// Fractional-order stability condition: every eigenvalue must satisfy
/// |arg lambda| > alpha pi / 2. A zero eigenvalue or a root exactly on the
/// boundary is inconclusive.
inline StabilityVerdict matignon_check(const EigenSet& eigs, FractionalOrder alpha) {
    if (eigs.values.empty()) throw std::invalid_argument("matignon_check: empty eigenvalue set");
    StabilityVerdict v;
    v.rule_fired = "matignon";
    v.margin = matignon_margin(eigs, alpha);
    const bool has_zero =
        std::any_of(eigs.values.begin(), eigs.values.end(), [](auto z) { return z == std::complex<double>(0.0); });
    if (has_zero || *v.margin == 0.0) {
        v.classification = Classification::Inconclusive;
    } else {
        v.classification = *v.margin > 0.0 ? Classification::LocallyAsymptoticallyStable : Classification::Unstable;
    }
    return v;
}

inline bool routh_hurwitz_quadratic(const CharPoly& p) {
    if (p.degree() != 2) throw std::invalid_argument("routh_hurwitz_quadratic: degree-2 polynomial required");
    return p[0] > 0.0 && p[1] > 0.0;
}

/// Discriminant of x^3 + w1 x^2 + w2 x + w3.
inline double cubic_discriminant(const CharPoly& p) {
    if (p.degree() != 3) throw std::invalid_argument("cubic_discriminant: degree-3 polynomial required");
    const double w1 = p[0], w2 = p[1], w3 = p[2];
    return 18.0 * w1 * w2 * w3 + w1 * w1 * w2 * w2 - 4.0 * w1 * w1 * w1 * w3 - 4.0 * w2 * w2 * w2 - 27.0 * w3 * w3;
}

inline constexpr double balance_tolerance = 1e-9;

/// Discriminant casework for the cubic characteristic polynomial of the SIRS
/// endemic Jacobian. Cases are tried in order; when none applies the verdict
/// is Inconclusive and carries the direct eigenvalue check.
inline StabilityVerdict classify_endemic_sirs(const CharPoly& p, FractionalOrder alpha) {
    if (p.degree() != 3) throw std::invalid_argument("classify_endemic_sirs: degree-3 polynomial required");
    const double w1 = p[0], w2 = p[1], w3 = p[2];
    const double a = alpha.value();
    const double disc = cubic_discriminant(p);
    const EigenSet eigs = eigenvalues(p);

    StabilityVerdict v;
    v.discriminant = disc;
    v.margin = matignon_margin(eigs, alpha);

    const double product = w1 * w2;
    const bool balanced =
        std::abs(product - w3) <= balance_tolerance * std::max({std::abs(product), std::abs(w3), 1e-300});

    if (disc > 0.0 && w1 > 0.0 && w3 > 0.0 && product > w3) {
        v.classification = Classification::LocallyAsymptoticallyStable;
        v.rule_fired = "prop-i";
    } else if (disc < 0.0 && w1 >= 0.0 && w2 >= 0.0 && w3 > 0.0 && a < 2.0 / 3.0) {
        v.classification = Classification::LocallyAsymptoticallyStable;
        v.rule_fired = "prop-ii";
    } else if (disc < 0.0 && w1 < 0.0 && w2 < 0.0 && a > 2.0 / 3.0) {
        // Complex pair with |arg| < pi/3 (or a positive real root).
        v.classification = Classification::Unstable;
        v.rule_fired = "prop-iii";
    } else if (disc < 0.0 && w1 > 0.0 && w2 > 0.0 && balanced) {
        // Roots -w1, +-i sqrt(w2): on the boundary when alpha == 1.
        v.classification = alpha.is_integer() ? Classification::Inconclusive
                                              : Classification::LocallyAsymptoticallyStable;
        v.rule_fired = "prop-iv";
    } else if (w3 <= 0.0) {
        v.classification = w3 < 0.0 ? Classification::Unstable : Classification::Inconclusive;
        v.rule_fired = "prop-v-violated";
    } else {
        v.classification = Classification::Inconclusive;
        v.rule_fired = "prop-v";
    }
    if (v.classification == Classification::Inconclusive) {
        v.matignon_cross_check = matignon_check(eigs, alpha).classification;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Reproduction numbers, equilibria, Jacobians
// ---------------------------------------------------------------------------

inline double sis_r0(const SisRates& r) noexcept { return r.infection / r.removal(); }
inline double sirs_r0(const SirsRates& r) noexcept { return r.infection / r.removal(); }

inline double sis_r0(const SisParams& p) { return sis_r0(SisRates::fractionalized(p)); }
inline double sirs_r0(const SirsParams& p) { return sirs_r0(SirsRates::fractionalized(p)); }

/// Endemic equilibria exist only above this reproduction number.
inline constexpr double endemic_threshold = 1.0 + 1e-12;

struct EquilibriumSet {
    std::vector<double> disease_free;
    std::optional<std::vector<double>> endemic;
    double r0 = 0.0;
    /// Max-norm of the model field at each stored point.
    double disease_free_residual = 0.0;
    std::optional<double> endemic_residual;
};

namespace detail {

inline double max_abs(std::initializer_list<double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline EquilibriumSet sis_equilibria(const SisRates& r) {
    EquilibriumSet eq;
    eq.r0 = sis_r0(r);
    eq.disease_free = {r.recruitment / r.natural_death, 0.0};
    const auto f0 = sis_rhs(r, eq.disease_free[0], 0.0);
    eq.disease_free_residual = max_abs({f0[0], f0[1]});
    if (eq.r0 > endemic_threshold) {
        const double excess = eq.r0 - 1.0;
        const double denom = r.natural_death + (r.disease_death + r.natural_death) * excess;
        const double s = r.recruitment / denom;
        const double i = excess * r.recruitment / denom;
        eq.endemic = std::vector<double>{s, i};
        const auto f = sis_rhs(r, s, i);
        eq.endemic_residual = max_abs({f[0], f[1]});
    }
    return eq;
}

inline EquilibriumSet sirs_equilibria(const SirsRates& r) {
    EquilibriumSet eq;
    eq.r0 = sirs_r0(r);
    eq.disease_free = {r.recruitment / r.natural_death, 0.0, 0.0};
    const auto f0 = sirs_rhs(r, eq.disease_free[0], 0.0, 0.0);
    eq.disease_free_residual = max_abs({f0[0], f0[1], f0[2]});
    if (eq.r0 > endemic_threshold) {
        const double excess = eq.r0 - 1.0;
        const double outflow_r = r.immunity_loss + r.natural_death;
        const double all = r.immunity_loss + r.recovery + r.natural_death;
        const double denom = r.disease_death * outflow_r * excess + r.natural_death * all * eq.r0;
        const double s = r.recruitment * all / denom;
        const double i = r.recruitment * outflow_r * excess / denom;
        const double rec = r.recruitment * r.recovery * excess / denom;
        eq.endemic = std::vector<double>{s, i, rec};
        const auto f = sirs_rhs(r, s, i, rec);
        eq.endemic_residual = max_abs({f[0], f[1], f[2]});
    }
    return eq;
}

inline SquareMatrix sis_jacobian(const SisRates& r, double s, double i) {
    const double n = s + i;
    if (n <= empty_population) throw std::domain_error("sis_jacobian: total population is (numerically) zero");
    const double n2 = n * n;
    const double ds = r.infection * i * i / n2;  // d(incidence)/dS
    const double di = r.infection * s * s / n2;  // d(incidence)/dI
    return {{-ds - r.natural_death, -di + r.return_rate}, {ds, di - r.removal()}};
}

inline SquareMatrix sirs_jacobian(const SirsRates& r, double s, double i, double rec) {
    const double n = s + i + rec;
    if (n <= empty_population) throw std::domain_error("sirs_jacobian: total population is (numerically) zero");
    const double n2 = n * n;
    const double ds = r.infection * i * (i + rec) / n2;
    const double di = r.infection * s * (s + rec) / n2;
    const double dr = -r.infection * s * i / n2;
    return {{-r.natural_death - ds, -di, r.immunity_loss - dr},
            {ds, di - r.removal(), dr},
            {0.0, r.recovery, -(r.natural_death + r.immunity_loss)}};
}

}  // namespace detail

inline EquilibriumSet sis_equilibria(const SisParams& p) {
    return detail::sis_equilibria(SisRates::fractionalized(p));
}
inline EquilibriumSet sirs_equilibria(const SirsParams& p) {
    return detail::sirs_equilibria(SirsRates::fractionalized(p));
}

inline SquareMatrix sis_jacobian(const SisParams& p, const SisState& x) {
    return detail::sis_jacobian(SisRates::fractionalized(p), x.susceptible, x.infected);
}
inline SquareMatrix sirs_jacobian(const SirsParams& p, const SirsState& x) {
    return detail::sirs_jacobian(SirsRates::fractionalized(p), x.susceptible, x.infected, x.recovered);
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

/// Closed-form coefficient expression compared against the trace/minor route.
struct CoefficientCheck {
    std::string name;
    double from_jacobian = 0.0;
    double closed_form = 0.0;
    bool matches = true;
};

struct EquilibriumAnalysis {
    std::string label;  // "disease_free" or "endemic"
    std::vector<double> state;
    SquareMatrix jacobian{0};
    CharPoly char_poly;
    EigenSet eigenvalues;
    StabilityVerdict route;     // threshold / Routh-Hurwitz / discriminant rule
    StabilityVerdict matignon;  // direct eigenvalue-angle check
    Classification overall = Classification::Inconclusive;
    bool routes_agree = true;
    std::vector<CoefficientCheck> diagnostics;
};

struct StabilityReport {
    std::string model;
    FractionalOrder alpha{1.0};
    EquilibriumSet equilibria;
    std::vector<EquilibriumAnalysis> analyses;

    /// The equilibrium trajectories are expected to approach: the endemic
    /// point when it exists, otherwise the disease-free one.
    const EquilibriumAnalysis& attractor() const { return analyses.back(); }
};

namespace detail {

inline bool contradicts(Classification a, Classification b) {
    return a != Classification::Inconclusive && b != Classification::Inconclusive && a != b;
}

inline void finish(EquilibriumAnalysis& an, FractionalOrder alpha) {
    an.char_poly = char_poly(an.jacobian);
    an.eigenvalues = eigenvalues(an.char_poly);
    an.matignon = matignon_check(an.eigenvalues, alpha);
    if (!an.route.margin) an.route.margin = an.matignon.margin;
    an.overall = an.route.classification != Classification::Inconclusive ? an.route.classification
                                                                          : an.matignon.classification;
    an.routes_agree = !contradicts(an.route.classification, an.matignon.classification);
}

inline CoefficientCheck coefficient_check(std::string name, double from_jacobian, double closed_form) {
    const double scale = std::max({std::abs(from_jacobian), std::abs(closed_form), 1e-300});
    return {std::move(name), from_jacobian, closed_form, std::abs(from_jacobian - closed_form) <= 1e-9 * scale};
}

inline StabilityVerdict threshold_verdict(double r0, const char* rule) {
    StabilityVerdict v;
    v.rule_fired = rule;
    if (r0 < 1.0) {
        v.classification = Classification::LocallyAsymptoticallyStable;
    } else if (r0 > 1.0) {
        v.classification = Classification::Unstable;
    } else {
        v.classification = Classification::Inconclusive;
    }
    return v;
}

inline StabilityReport sis_report(const SisRates& r, FractionalOrder alpha, std::string model) {
    StabilityReport rep;
    rep.model = std::move(model);
    rep.alpha = alpha;
    rep.equilibria = sis_equilibria(r);

    EquilibriumAnalysis df;
    df.label = "disease_free";
    df.state = rep.equilibria.disease_free;
    df.jacobian = sis_jacobian(r, df.state[0], df.state[1]);
    // J(H_df) is upper triangular: -nu and phi - (eta + nu + omega) = removal (R0 - 1).
    df.route = threshold_verdict(rep.equilibria.r0, "r0-threshold");
    finish(df, alpha);
    rep.analyses.push_back(std::move(df));

    if (rep.equilibria.endemic) {
        EquilibriumAnalysis en;
        en.label = "endemic";
        en.state = *rep.equilibria.endemic;
        en.jacobian = sis_jacobian(r, en.state[0], en.state[1]);
        const CharPoly cp = char_poly(en.jacobian);
        en.route.rule_fired = "RH-quadratic";
        en.route.classification =
            routh_hurwitz_quadratic(cp) ? Classification::LocallyAsymptoticallyStable : Classification::Inconclusive;
        finish(en, alpha);
        const double s = en.state[0], i = en.state[1], n = s + i;
        en.diagnostics.push_back(coefficient_check("a1", cp[0], r.natural_death + r.infection * i / n));
        en.diagnostics.push_back(coefficient_check("a2", cp[1], r.infection * i * r.recruitment / (n * n)));
        rep.analyses.push_back(std::move(en));
    }
    return rep;
}

// Coefficients of the endemic SIRS characteristic polynomial as printed in
// expanded form (valid only at the endemic point).
inline std::vector<double> sirs_expanded_coefficients(const SirsRates& r, double s, double i, double rec) {
    const double n = s + i + rec, n2 = n * n, n4 = n2 * n2;
    const double phi = r.infection, nu = r.natural_death, ka = r.recovery, ga = r.immunity_loss;
    const double a = phi * i * (i + rec) / n2;
    const double b = phi * s * i / n2;
    const double quartic1 = phi * phi * s * i * (i + rec) * (s + rec) / n4;
    const double quartic2 = phi * phi * i * i * s * (i + rec) / n4;
    const double w1 = a + b + 2.0 * nu + ga;
    const double w2 = quartic1 + quartic2 + ka * b + nu * a + 2.0 * nu * b + ga * a + ga * b + nu * ga + nu * nu;
    const double w3 = nu * quartic1 + nu * quartic2 + ga * quartic1 + ga * quartic2 + ka * nu * b + ga * nu * b -
                      ka * ga * a + nu * nu * b;
    return {w1, w2, w3};
}

inline StabilityReport sirs_report(const SirsRates& r, FractionalOrder alpha) {
    StabilityReport rep;
    rep.model = "sirs";
    rep.alpha = alpha;
    rep.equilibria = sirs_equilibria(r);

    EquilibriumAnalysis df;
    df.label = "disease_free";
    df.state = rep.equilibria.disease_free;
    df.jacobian = sirs_jacobian(r, df.state[0], df.state[1], df.state[2]);
    {
        // lambda_1 = -nu; the rest come from the lower 2x2 block E.
        const SquareMatrix& j = df.jacobian;
        const CharPoly block{{-(j(1, 1) + j(2, 2)), j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1)}};
        df.route.rule_fired = "r0-threshold-block";
        if (j(0, 0) < 0.0 && routh_hurwitz_quadratic(block)) {
            df.route.classification = Classification::LocallyAsymptoticallyStable;
        } else if (block[1] < 0.0) {
            // E is triangular, so a negative determinant means a positive real root.
            df.route.classification = Classification::Unstable;
        } else {
            df.route.classification = Classification::Inconclusive;
        }
    }
    finish(df, alpha);
    rep.analyses.push_back(std::move(df));

    if (rep.equilibria.endemic) {
        EquilibriumAnalysis en;
        en.label = "endemic";
        en.state = *rep.equilibria.endemic;
        en.jacobian = sirs_jacobian(r, en.state[0], en.state[1], en.state[2]);
        en.route = classify_endemic_sirs(char_poly(en.jacobian), alpha);
        finish(en, alpha);
        const auto printed = sirs_expanded_coefficients(r, en.state[0], en.state[1], en.state[2]);
        const char* names[] = {"w1", "w2", "w3"};
        for (std::size_t k = 0; k < 3; ++k) {
            en.diagnostics.push_back(coefficient_check(names[k], en.char_poly[k], printed[k]));
        }
        rep.analyses.push_back(std::move(en));
    }
    return rep;
}

}  // namespace detail

inline StabilityReport stability_report(const SisParams& p) {
    return detail::sis_report(SisRates::fractionalized(p), p.alpha, "sis");
}

inline StabilityReport stability_report(const SirsParams& p) {
    return detail::sirs_report(SirsRates::fractionalized(p), p.alpha);
}

/// Report for the SIS field with raw rates; only the angle condition uses alpha.
inline StabilityReport legacy_sis_stability_report(const SisParams& p) {
    return detail::sis_report(SisRates::raw(p), p.alpha, "sis-legacy");
}

}  // namespace fracepi
