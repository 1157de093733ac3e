#pragma once

#include <stdexcept>
#include <string>

namespace ariis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the time loop and the linear solvers.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Krylov non-convergence; carries the final state of the iteration.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : SolverError(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace ariis
