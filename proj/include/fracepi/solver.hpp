#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracepi/errors.hpp"
#include "fracepi/special_functions.hpp"
#include "fracepi/types.hpp"

namespace fracepi {

/// Right-hand side of D^alpha y = f(t, y): writes f(t, y) into dy.
template <class F>
concept vector_field = requires(const F& f, double t, std::span<const double> y, std::span<double> dy) {
    { f.dimension() } -> std::convertible_to<std::size_t>;
    f(t, y, dy);
};

/// Type-erased vector field.
class VectorField {
public:
    using Evaluator = std::function<void(double, std::span<const double>, std::span<double>)>;

    VectorField(std::size_t dimension, Evaluator eval) : dimension_(dimension), eval_(std::move(eval)) {
        if (dimension_ == 0) throw std::invalid_argument("vector field dimension must be >= 1");
    }

    template <vector_field F>
        requires(!std::same_as<std::remove_cvref_t<F>, VectorField>)
    VectorField(F field)  // NOLINT(google-explicit-constructor)
        : VectorField(field.dimension(),
                      [f = std::move(field)](double t, std::span<const double> y, std::span<double> dy) {
                          f(t, y, dy);
                      }) {}

    std::size_t dimension() const noexcept { return dimension_; }
    void operator()(double t, std::span<const double> y, std::span<double> dy) const { eval_(t, y, dy); }

private:
    std::size_t dimension_;
    Evaluator eval_;
};

/// Fractional Adams-Bashforth predictor weight b_{j,n+1}.
inline double predictor_weights(FractionalOrder alpha, double h, std::size_t n, std::size_t j) {
    if (j > n) throw std::out_of_range("predictor_weights: j must not exceed n");
    const double a = alpha.value();
    const double k = static_cast<double>(n - j);
    return std::pow(h, a) / a * (std::pow(k + 1.0, a) - std::pow(k, a));
}

/// Fractional Adams-Moulton corrector weight a_{j,n+1}.
inline double corrector_weights(FractionalOrder alpha, double h, std::size_t n, std::size_t j) {
    if (j > n + 1) throw std::out_of_range("corrector_weights: j must not exceed n + 1");
    const double a = alpha.value();
    const double scale = std::pow(h, a) / (a * (a + 1.0));
    const double nd = static_cast<double>(n);
    if (j == 0) {
        return scale * (std::pow(nd, a + 1.0) - (nd - a) * std::pow(nd + 1.0, a));
    }
    if (j == n + 1) return scale;
    const double m = static_cast<double>(n - j);
    return scale * (std::pow(m + 2.0, a + 1.0) + std::pow(m, a + 1.0) - 2.0 * std::pow(m + 1.0, a + 1.0));
}

struct PeceOptions {
    int corrector_iterations = 1;
    /// Floor every state component at zero after each corrector pass.
    bool clamp_nonnegative = false;
};

inline constexpr int max_corrector_iterations = 10;

namespace detail {

inline void require_finite(std::span<const double> y, std::size_t step, const char* stage) {
    for (double v : y) {
        if (!std::isfinite(v)) throw NumericalFailure(step, std::string("non-finite state after ") + stage);
    }
}

// Weight tables that depend only on the lag between indices. With
// c_b = h^a / a and c_a = h^a / (a (a + 1)):
//   b_{j,n+1}            = c_b * lag_b[n - j]
//   a_{j,n+1} (0<j<=n)   = c_a * lag_a[n - j]
//   a_{0,n+1}            = c_a * head_a[n]
struct ConvolutionWeights {
    std::vector<double> lag_b;
    std::vector<double> lag_a;
    std::vector<double> head_a;
    double c_b = 0.0;
    double c_a = 0.0;

    ConvolutionWeights(double alpha, double h, std::size_t n_steps)
        : lag_b(n_steps), lag_a(n_steps), head_a(n_steps) {
        std::vector<double> pa(n_steps + 2), pa1(n_steps + 2);
        for (std::size_t k = 0; k < n_steps + 2; ++k) {
            const double kd = static_cast<double>(k);
            pa[k] = std::pow(kd, alpha);
            pa1[k] = std::pow(kd, alpha + 1.0);
        }
        for (std::size_t k = 0; k < n_steps; ++k) {
            lag_b[k] = pa[k + 1] - pa[k];
            lag_a[k] = pa1[k + 2] + pa1[k] - 2.0 * pa1[k + 1];
            head_a[k] = pa1[k] - (static_cast<double>(k) - alpha) * pa[k + 1];
        }
        c_b = std::pow(h, alpha) / alpha;
        c_a = std::pow(h, alpha) / (alpha * (alpha + 1.0));
    }
};

// Predictor and corrector history sums for step n -> n + 1, accumulated in
// step-index order. All components advance together for instruction-level
// parallelism.
template <std::size_t D>
void convolve(const ConvolutionWeights& w, const double* history, std::size_t n, double* pred_sum,
              double* corr_sum) {
    const double* lb = w.lag_b.data();
    const double* la = w.lag_a.data();
    double sb[D];
    double sa[D];
    for (std::size_t i = 0; i < D; ++i) {
        sb[i] = lb[n] * history[i];
        sa[i] = 0.0;
    }
    for (std::size_t j = 1; j <= n; ++j) {
        const double b = lb[n - j];
        const double a = la[n - j];
        const double* fj = history + j * D;
        for (std::size_t i = 0; i < D; ++i) {
            sb[i] += b * fj[i];
            sa[i] += a * fj[i];
        }
    }
    for (std::size_t i = 0; i < D; ++i) {
        pred_sum[i] = w.c_b * sb[i];
        corr_sum[i] = w.c_a * (sa[i] + w.head_a[n] * history[i]);
    }
}

inline void convolve_dynamic(const ConvolutionWeights& w, const double* history, std::size_t d, std::size_t n,
                             double* pred_sum, double* corr_sum) {
    for (std::size_t i = 0; i < d; ++i) {
        double sb = w.lag_b[n] * history[i];
        double sa = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            sb += w.lag_b[n - j] * history[j * d + i];
            sa += w.lag_a[n - j] * history[j * d + i];
        }
        pred_sum[i] = w.c_b * sb;
        corr_sum[i] = w.c_a * (sa + w.head_a[n] * history[i]);
    }
}

}  // namespace detail

/// Fixed-step fractional Adams-Bashforth-Moulton (PECE) integrator for
/// D^alpha y = f(t, y), y(0) = y0, 0 < alpha <= 1.
///
/// Full-memory: every step convolves the whole history of f(t_j, y_j).
/// Throws NumericalFailure with the step index if a state turns non-finite.
template <vector_field F>
Trajectory pece_solve(const F& f, FractionalOrder alpha, std::span<const double> y0, const GridSpec& grid,
                      const PeceOptions& options = {}) {
    const std::size_t d = f.dimension();
    if (y0.size() != d) {
        throw std::invalid_argument("pece_solve: initial state has dimension " + std::to_string(y0.size()) +
                                    ", field expects " + std::to_string(d));
    }
    if (options.corrector_iterations < 1 || options.corrector_iterations > max_corrector_iterations) {
        throw std::invalid_argument("pece_solve: corrector_iterations must be in [1, 10]");
    }

    const std::size_t n_steps = grid.n_steps();
    const double a = alpha.value();
    const double h = grid.step();
    const double inv_gamma = 1.0 / gamma_fn(a);
    const detail::ConvolutionWeights weights(a, h, n_steps);

    Trajectory traj(alpha, grid, d);
    std::copy(y0.begin(), y0.end(), traj.row(0).begin());
    detail::require_finite(traj.row(0), 0, "initial condition");

    // history[j * d + i] = i-th component of f(t_j, y_j).
    std::vector<double> history((n_steps + 1) * d);
    std::vector<double> fbuf(d), predicted(d), pred_sum(d), corr_sum(d), current(d);

    auto store_history = [&](std::size_t k, std::span<const double> fk) {
        std::copy(fk.begin(), fk.end(), history.begin() + static_cast<std::ptrdiff_t>(k * d));
    };

    f(grid.time(0), traj.row(0), fbuf);
    detail::require_finite(fbuf, 0, "field evaluation");
    store_history(0, fbuf);

    for (std::size_t n = 0; n < n_steps; ++n) {
        const std::size_t step = n + 1;
        const double t_next = grid.time(step);

        switch (d) {
            case 1:
                detail::convolve<1>(weights, history.data(), n, pred_sum.data(), corr_sum.data());
                break;
            case 2:
                detail::convolve<2>(weights, history.data(), n, pred_sum.data(), corr_sum.data());
                break;
            case 3:
                detail::convolve<3>(weights, history.data(), n, pred_sum.data(), corr_sum.data());
                break;
            default:
                detail::convolve_dynamic(weights, history.data(), d, n, pred_sum.data(), corr_sum.data());
        }

        for (std::size_t i = 0; i < d; ++i) predicted[i] = y0[i] + inv_gamma * pred_sum[i];
        detail::require_finite(predicted, step, "predictor");

        for (int it = 0; it < options.corrector_iterations; ++it) {
            f(t_next, predicted, fbuf);
            detail::require_finite(fbuf, step, "field evaluation");
            for (std::size_t i = 0; i < d; ++i) {
                current[i] = y0[i] + inv_gamma * (corr_sum[i] + weights.c_a * fbuf[i]);
                if (options.clamp_nonnegative && current[i] < 0.0) current[i] = 0.0;
            }
            detail::require_finite(current, step, "corrector");
            predicted = current;
        }

        std::copy(current.begin(), current.end(), traj.row(step).begin());
        f(t_next, current, fbuf);
        detail::require_finite(fbuf, step, "field evaluation");
        store_history(step, fbuf);
    }
    return traj;
}

template <vector_field F>
Trajectory pece_solve(const F& f, FractionalOrder alpha, std::span<const double> y0, const GridSpec& grid,
                      int corrector_iterations) {
    return pece_solve(f, alpha, y0, grid, PeceOptions{corrector_iterations, false});
}

/// Classical fourth-order Runge-Kutta on the same uniform grid (integer order).
template <vector_field F>
Trajectory rk4_solve(const F& f, std::span<const double> y0, const GridSpec& grid) {
    const std::size_t d = f.dimension();
    if (y0.size() != d) throw std::invalid_argument("rk4_solve: initial state dimension mismatch");
    const double h = grid.step();

    Trajectory traj(FractionalOrder(1.0), grid, d);
    std::copy(y0.begin(), y0.end(), traj.row(0).begin());
    detail::require_finite(traj.row(0), 0, "initial condition");

    std::vector<double> y(y0.begin(), y0.end()), k1(d), k2(d), k3(d), k4(d), tmp(d);
    for (std::size_t n = 0; n < grid.n_steps(); ++n) {
        const double t = grid.time(n);
        f(t, y, k1);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        detail::require_finite(tmp, n + 1, "rk4 stage");
        f(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        detail::require_finite(tmp, n + 1, "rk4 stage");
        f(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
        detail::require_finite(tmp, n + 1, "rk4 stage");
        f(t + h, tmp, k4);
        for (std::size_t i = 0; i < d; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        detail::require_finite(y, n + 1, "rk4 step");
        std::copy(y.begin(), y.end(), traj.row(n + 1).begin());
    }
    return traj;
}

}  // namespace fracepi
