#pragma once

#include <stdexcept>
#include <string>

namespace fairnav {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input does not follow an exchange format; the message names the field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A fairness spec (or attribute name) that does not fit the city it is
/// applied to.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this kind of spec.
class UnsupportedSpecError : public Error {
 public:
  using Error::Error;
};

/// Constraints that no tour within the budget can satisfy.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The exact oracle refuses instances above its size guard.
class GuardLimitError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

}  // namespace fairnav
