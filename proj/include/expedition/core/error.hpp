#pragma once

#include <stdexcept>
#include <string>

namespace expedition {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad parameters, priors, arguments, or config fields.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Evaluation requested outside a quantity's valid domain.
class RangeError : public Error {
public:
  explicit RangeError(const std::string& msg) : Error(msg) {}
};

/// Linear algebra broke down (factorization failed after jitter escalation,
/// degenerate particle weights, ...).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// No candidate satisfies the operational constraints.
class InfeasibleError : public Error {
public:
  explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

}  // namespace expedition
