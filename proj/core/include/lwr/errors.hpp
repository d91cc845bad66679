#pragma once

#include <stdexcept>
#include <string>

namespace lwr {

/// Base class for every failure raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class InvalidDegree : public Error {
 public:
  using Error::Error;
};

class TooFewElements : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Two finite element functions (or a function and an operator) live on different meshes.
class MeshMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeChi : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Newton iteration exhausted its budget. Carries the last residual norm.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double residual_norm)
      : Error(what), iterations_(iterations), residual_norm_(residual_norm) {}

  int iterations() const noexcept { return iterations_; }
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  int iterations_;
  double residual_norm_;
};

/// A time step failed; wraps the underlying solver error with the step index.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

class NonHalvingLadder : public Error {
 public:
  using Error::Error;
};

}  // namespace lwr
