#pragma once

#include <stdexcept>
#include <string>

namespace hmt {

/// Raised when a computation cannot produce a trustworthy number
/// (non-coercive operator, solver breakdown, iteration cap).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exponential in the functional exceeded the log-space cap.
class ExponentOverflow : public NumericalError {
public:
    ExponentOverflow(const std::string& what, double radius)
        : NumericalError(what), radius_(radius) {}

    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

}  // namespace hmt
