#pragma once

#include <stdexcept>
#include <string>

namespace orbitlab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enclosure is too wide for the requested accuracy; retry at higher precision.
class PrecisionInsufficient : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (log of a nonpositive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sign or comparison could not be certified at the working precision.
class AmbiguousSign : public Error {
 public:
  using Error::Error;
};

/// Malformed descriptor, literal or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A construction rule (spacing, growth, cover, support) was violated.
class RuleViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace orbitlab
