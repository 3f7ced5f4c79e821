#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netident/dynamics.hpp"
#include "netident/matrix.hpp"

namespace netident::estimation {

struct MomentSet {
  DenseMatrix gamma0_hat;  // symmetrized
  DenseMatrix gamma1_hat;
  std::size_t T_eff = 0;
  bool small_sample = false;  // T < n + 2
};

enum class Method { ClosedForm, Gmm, Lasso };

struct EstimateResult {
  DenseMatrix A_hat;
  double objective = 0.0;
  std::optional<DenseMatrix> variance;  // n^2 x n^2 sandwich
  Method method = Method::ClosedForm;
  double lambda = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  bool rank_deficient = false;
};

MomentSet sample_moments(const dynamics::SimPath& path,
                         const dynamics::AggregateShock& shock =
                             dynamics::AggregateShock{},
                         double delta = 0.0);

// Residual Gamma1_hat - [(1-delta) I + A D_f] Gamma0_hat.
DenseMatrix moment_function(const DenseMatrix& A, double delta,
                            const DenseMatrix& D_f, const MomentSet& moments);

EstimateResult estimate_closed_form(const MomentSet& moments, double delta,
                                    const DenseMatrix& D_f);

struct GmmOptions {
  bool two_step = false;
  // needed for the two-step S_hat
  const dynamics::SimPath* path = nullptr;
};

// W empty means identity weighting (equals the closed form when Gamma0_hat
// is invertible). W must be symmetric PD on the n^2-dim vec space.
EstimateResult estimate_gmm(const MomentSet& moments, double delta,
                            const DenseMatrix& D_f,
                            const DenseMatrix& W = DenseMatrix{},
                            const GmmOptions& opts = GmmOptions{});

// Sandwich V = (G'WG)^-1 G'W S W G (G'WG)^-1 with analytic G and
// S_hat = (1/T) sum g_t g_t'.
DenseMatrix asymptotic_variance(const dynamics::SimPath& path,
                                const DenseMatrix& A_hat, double delta,
                                const DenseMatrix& D_f,
                                const DenseMatrix& W = DenseMatrix{});

struct LassoOptions {
  double tol = 1e-9;
  std::size_t max_iterations = 10000;
  bool fista = true;
  const DenseMatrix* warm_start = nullptr;
};

EstimateResult estimate_lasso(const MomentSet& moments, double delta,
                              const DenseMatrix& D_f, double lambda,
                              const LassoOptions& opts = LassoOptions{});

std::vector<EstimateResult> regularization_path(
    const MomentSet& moments, double delta, const DenseMatrix& D_f,
    const std::vector<double>& lambdas);

std::size_t support_size(const DenseMatrix& a, double threshold = 1e-8);

// g_t matrix (rows = time, cols = n^2) used by the variance and two-step
// weighting; exposed for tests.
DenseMatrix moment_contributions(const dynamics::SimPath& path,
                                 const DenseMatrix& A_hat, double delta,
                                 const DenseMatrix& D_f);

}  // namespace netident::estimation
