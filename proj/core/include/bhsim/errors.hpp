#pragma once

#include <stdexcept>
#include <string>

namespace bhsim {

/// Precondition or shape violation on an input (wrong basis, bad site index, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sector dimension exceeds the configured cap.
class SizingError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace bhsim
