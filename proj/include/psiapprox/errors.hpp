#pragma once

#include <stdexcept>
#include <string>

namespace psiapprox {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (t < 1, k < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A kernel was evaluated at a point where its series diverges.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// The requested tolerance needs more terms than the configured cap.
class ToleranceUnreachable : public Error {
 public:
  using Error::Error;
};

class MeanNotZero : public Error {
 public:
  using Error::Error;
};

class ZeroPolynomial : public Error {
 public:
  using Error::Error;
};

/// The exchange iteration could not build a nonsingular reference system.
class DegenerateActiveSet : public Error {
 public:
  using Error::Error;
};

/// The tail of a Lemma-1 sum could not be bounded below the tolerance.
class TailNotControlled : public Error {
 public:
  using Error::Error;
};

/// A configuration or class specification failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace psiapprox
