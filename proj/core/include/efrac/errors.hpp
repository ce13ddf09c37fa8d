#pragma once

#include <stdexcept>
#include <string>

namespace efrac {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (modulus below 3, non-reduced residue, gcd precondition, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A size limit was exceeded: sieve limit, subgroup enumeration cap,
/// enumeration guard, or integer range.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The request is well-formed but the library does not handle that case.
class NotSupportedError : public Error {
 public:
  using Error::Error;
};

/// A persisted file could not be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace efrac
