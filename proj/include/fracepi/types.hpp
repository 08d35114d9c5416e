#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracepi {

/// Caputo derivative order, restricted to (0, 1].
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw std::domain_error("fractional order must lie in (0, 1], got " +
                                    std::to_string(alpha));
        }
    }

    double value() const noexcept { return alpha_; }
    bool is_integer() const noexcept { return alpha_ == 1.0; }

    friend bool operator==(FractionalOrder, FractionalOrder) = default;

private:
    double alpha_;
};

/// Uniform time grid t_k = k * step, k = 0..n_steps.
class GridSpec {
public:
    GridSpec(double step, double t_end) : step_(step), t_end_(t_end) {
        if (!(step > 0.0) || !std::isfinite(step)) {
            throw std::domain_error("grid step must be positive and finite");
        }
        if (!(t_end >= step) || !std::isfinite(t_end)) {
            throw std::domain_error("grid t_end must be finite and at least one step");
        }
        // t_end / step is often a hair below an integer (2000 / 0.05), so
        // absorb the rounding before truncating.
        const double ratio = t_end / step;
        n_steps_ = static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
        if (n_steps_ < 1) n_steps_ = 1;
    }

    double step() const noexcept { return step_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * step_; }
    double final_time() const noexcept { return time(n_steps_); }

private:
    double step_;
    double t_end_;
    std::size_t n_steps_;
};

/// Solution samples on a uniform grid; states are stored row-major.
class Trajectory {
public:
    Trajectory(FractionalOrder alpha, GridSpec grid, std::size_t dimension)
        : alpha_(alpha), grid_(grid), dimension_(dimension),
          times_(grid.n_steps() + 1), states_((grid.n_steps() + 1) * dimension) {
        for (std::size_t k = 0; k < times_.size(); ++k) times_[k] = grid.time(k);
    }

    FractionalOrder alpha() const noexcept { return alpha_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return times_.size(); }

    const std::vector<double>& times() const noexcept { return times_; }

    std::span<const double> row(std::size_t k) const {
        return {states_.data() + k * dimension_, dimension_};
    }
    std::span<double> row(std::size_t k) {
        return {states_.data() + k * dimension_, dimension_};
    }
    std::span<const double> back() const { return row(size() - 1); }

    double operator()(std::size_t k, std::size_t i) const { return states_[k * dimension_ + i]; }

    friend bool operator==(const Trajectory& a, const Trajectory& b) {
        return a.alpha_ == b.alpha_ && a.dimension_ == b.dimension_ && a.times_ == b.times_ &&
               a.states_ == b.states_;
    }

private:
    FractionalOrder alpha_;
    GridSpec grid_;
    std::size_t dimension_;
    std::vector<double> times_;
    std::vector<double> states_;
};

}  // namespace fracepi
