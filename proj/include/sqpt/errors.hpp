#pragma once

#include <stdexcept>
#include <string>

namespace sqpt {

/// Operand shapes or dimensions do not agree.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An argument is outside the domain of the operation (index, parameter, name).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system is singular or too ill-conditioned to solve reliably.
class SingularSystemError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A channel or outcome violates a physicality requirement (CP, TP, probabilities).
class PhysicalityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed channel or chi JSON document.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sqpt
