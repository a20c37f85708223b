#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gbmlab {

// Thrown when inputs violate a documented precondition (bad config keys,
// dimension mismatches, out-of-range parameters). CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a numerical procedure aborts (divergent iteration, NaN in a
// coefficient, CFL violation mid-run). CLI maps this to exit 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

inline bool nearly_equal(double a, double b, double abs_tol, double rel_tol = 0.0) {
    const double diff = std::fabs(a - b);
    return diff <= abs_tol + rel_tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace gbmlab
