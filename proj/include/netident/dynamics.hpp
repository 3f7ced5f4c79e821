#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netident/matrix.hpp"

namespace netident::dynamics {

enum class LinkKind { Identity, Tanh, Logistic, Softplus };

std::string link_name(LinkKind k);
LinkKind link_from_name(const std::string& name);

// Componentwise link f(z, theta). theta[0] is the slope (default 1); all
// supported kinds are globally Lipschitz with derivative bounded by the
// slope.
struct LinkFunction {
  LinkKind kind = LinkKind::Identity;
  std::vector<double> theta;

  double slope() const { return theta.empty() ? 1.0 : theta[0]; }
  double eval(double z) const;
  double deriv(double z) const;
};

std::vector<double> link_eval(const LinkFunction& link,
                              const std::vector<double>& z);

// Diagonal Jacobian D_f(z) with entries f'(z_i).
DenseMatrix link_jacobian(const LinkFunction& link,
                          const std::vector<double>& z);

enum class ShockKind { None, Constant, Sinusoid };

struct AggregateShock {
  ShockKind kind = ShockKind::None;
  double level = 0.0;      // Constant
  double amplitude = 0.0;  // Sinusoid
  double period = 1.0;     // Sinusoid

  double value(long t) const;
};

struct DynamicsConfig {
  std::size_t n = 0;
  double delta = 0.3;
  DenseMatrix A;  // n x n; empty means zero matrix
  LinkFunction link;
  DenseMatrix omega;  // shock covariance; empty means identity * sigma^2
  double sigma = 1.0; // used when omega is empty
  AggregateShock aggregate_shock;
  std::size_t burn_in = 500;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> initial_state;  // debug hook, skips burn-in
};

struct SimPath {
  std::size_t n = 0;
  std::size_t T = 0;
  std::vector<double> states;  // T x n row-major
  long t_offset = 0;           // global time index of the first stored row
  std::uint64_t seed = 0;
  std::string fingerprint;

  double at(std::size_t t, std::size_t i) const { return states[t * n + i]; }
};

SimPath simulate(const DynamicsConfig& cfg, std::size_t T);

DenseMatrix effective_operator(const DynamicsConfig& cfg,
                               const std::vector<double>& z_star);

// Gamma0 = lyapunov(B, Omega), Gamma1 = B Gamma0.
std::pair<DenseMatrix, DenseMatrix> implied_covariances(
    const DenseMatrix& B, const DenseMatrix& Omega);

// Sigma_U = sigma^2 (I - rho A)^-1 (I - rho A')^-1.
DenseMatrix latent_covariance(const DenseMatrix& A, double rho, double sigma);

// Standard deviation of the off-diagonal entries of a symmetric covariance.
double covariance_heterogeneity(const DenseMatrix& sigma);

std::string config_fingerprint(const DynamicsConfig& cfg);

// CSV round trip: header "t,z1,...,zn", 17 significant digits.
void write_path_csv(const SimPath& path, const std::string& file);
SimPath read_path_csv(const std::string& file);

}  // namespace netident::dynamics
