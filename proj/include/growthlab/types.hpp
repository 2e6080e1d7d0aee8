#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace growthlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// An iterative solver failed to reach its residual target. Carries the
// residual of the last iterate so callers can report how close it got.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

// A growth step was requested beyond the critical area of its potential.
class SupercriticalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace growthlab
