#pragma once

#include <stdexcept>
#include <string>

namespace circlesim {

/// Argument lies outside the domain of an operation (e.g. an interval
/// endpoint outside [0,1), a negative density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two objects that must agree in shape do not (dimension, window,
/// partition, resolution).
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation fails on well-formed input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circlesim
