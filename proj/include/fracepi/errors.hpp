#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracepi {

/// Raised when an integrator produces a non-finite state component.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::size_t step, const std::string& what)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

    /// Same failure with `prefix` prepended to the message.
    NumericalFailure with_context(const std::string& prefix) const {
        return NumericalFailure(step_, prefix + what(), Raw{});
    }

private:
    struct Raw {};
    NumericalFailure(std::size_t step, const std::string& message, Raw) : std::runtime_error(message), step_(step) {}

    std::size_t step_;
};

/// Invalid user configuration (scenario files, CLI arguments).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracepi
