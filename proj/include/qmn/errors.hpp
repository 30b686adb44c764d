#pragma once

#include <stdexcept>
#include <string>

namespace qmn {

/// Input violates a documented precondition or type invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested object would exceed the configured size limits.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative routine exhausted its iteration budget.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A scalar map was evaluated outside its domain (e.g. log of a negative eigenvalue).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmn
