#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsirs {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A function evaluation returned a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A Richardson-extrapolated limit did not converge.
class LimitFailure : public Error {
 public:
  using Error::Error;
};

/// The incidence function violates one of the standing hypotheses.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// No sign change of the equilibrium function was found although R0 > 1.
class BracketFailure : public Error {
 public:
  BracketFailure(std::string what, std::vector<std::pair<double, double>> samples)
      : Error(std::move(what)), samples_(std::move(samples)) {}

  /// The (I, g(I)) samples that were scanned.
  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

 private:
  std::vector<std::pair<double, double>> samples_;
};

/// A root candidate did not pass the vector-field residual check.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at u = S*, where G is undefined.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (e.g. log of I <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter value makes a default choice undefined (e.g. gamma2 = 0).
class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

/// An integrated state left the feasible region by more than round-off.
class InvarianceViolation : public Error {
 public:
  using Error::Error;
};

/// An integrated state became non-finite.
class BlowUp : public Error {
 public:
  using Error::Error;
};

}  // namespace gsirs
