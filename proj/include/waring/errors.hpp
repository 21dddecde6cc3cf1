#pragma once

#include <stdexcept>
#include <string>

namespace waring {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The posterior GWD(n01+1, n10+1, ncap+ell+1) is improper (n11 + ell <= 1),
/// or a quantile was requested from improper parameters.
class ImproperDistributionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Adaptive quadrature did not reach its tolerance within the subdivision budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace waring
