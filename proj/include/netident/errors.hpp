#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace netident {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& msg, double rcond_estimate = 0.0)
      : Error(msg), rcond(rcond_estimate) {}
  double rcond;
};

// Eigen iteration ran out of sweeps; carries whatever converged.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg,
                   std::vector<std::complex<double>> partial_eigenvalues = {})
      : Error(msg), partial(std::move(partial_eigenvalues)) {}
  std::vector<std::complex<double>> partial;
};

class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& msg, double radius = 0.0)
      : Error(msg), spectral_radius(radius) {}
  double spectral_radius;
};

class ExplosionError : public Error {
 public:
  ExplosionError(const std::string& msg, long step_index = -1)
      : Error(msg), step(step_index) {}
  long step;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace netident
