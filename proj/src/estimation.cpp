#include "netident/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "netident/linalg.hpp"

namespace netident::estimation {

namespace {

double frob_sq(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return acc;
}

// ridge-stabilized solve of M X = Rhs for symmetric M; sets the
// rank-deficiency flag when the plain factorization is unusable
DenseMatrix solve_spd_with_fallback(const DenseMatrix& m,
                                    const DenseMatrix& rhs, bool* deficient) {
  *deficient = false;
  linalg::LuDecomposition lu = linalg::LuDecomposition::compute(m);
  if (!lu.singular()) {
    const DenseMatrix x = lu.solve(rhs);
    if (x.all_finite()) {
      // cheap conditioning probe via the residual
      const DenseMatrix resid = m * x - rhs;
      const double rel = linalg::frobenius_norm(resid) /
                         (1.0 + linalg::frobenius_norm(rhs));
      if (rel < 1e-6) return x;
    }
  }
  *deficient = true;
  double trace = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) trace += m(i, i);
  const double ridge =
      1e-10 * (trace > 0.0 ? trace / static_cast<double>(m.rows()) : 1.0);
  DenseMatrix mr = m;
  for (std::size_t i = 0; i < m.rows(); ++i) mr(i, i) += ridge;
  return linalg::LuDecomposition::compute(mr).solve(rhs);
}

}  // namespace

MomentSet sample_moments(const dynamics::SimPath& path,
                         const dynamics::AggregateShock& shock, double delta) {
  const std::size_t n = path.n;
  const std::size_t T = path.T;
  if (T < 2) throw InsufficientDataError("sample_moments: need T >= 2");

  // the observable aggregate shock accumulates like the noiseless scalar
  // recursion; its contribution is removed before averaging
  std::vector<double> mean_path(T, 0.0);
  if (shock.kind != dynamics::ShockKind::None) {
    double m = 0.0;
    for (long t = 0; t < path.t_offset + static_cast<long>(T); ++t) {
      m = (1.0 - delta) * m + shock.value(t);
      const long row = t + 1 - path.t_offset - 1;  // state index after update
      if (t >= path.t_offset) mean_path[static_cast<std::size_t>(row)] = m;
    }
  }

  auto centered = [&](std::size_t t, std::size_t i) {
    return path.at(t, i) - mean_path[t];
  };

  MomentSet out;
  out.T_eff = T;
  out.small_sample = T < n + 2;
  DenseMatrix g0(n, n), g1(n, n);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = centered(t, i);
      for (std::size_t j = 0; j <= i; ++j) g0(i, j) += zi * centered(t, j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = g0(i, j) / static_cast<double>(T);
      g0(i, j) = v;
      g0(j, i) = v;
    }
  for (std::size_t t = 0; t + 1 < T; ++t)
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = centered(t + 1, i);
      for (std::size_t j = 0; j < n; ++j) g1(i, j) += zi * centered(t, j);
    }
  g1 *= 1.0 / static_cast<double>(T - 1);
  out.gamma0_hat = std::move(g0);
  out.gamma1_hat = std::move(g1);
  return out;
}

DenseMatrix moment_function(const DenseMatrix& A, double delta,
                            const DenseMatrix& D_f, const MomentSet& moments) {
  const DenseMatrix& g0 = moments.gamma0_hat;
  DenseMatrix b = DenseMatrix::identity(g0.rows()) * (1.0 - delta);
  b += A * D_f;
  return moments.gamma1_hat - b * g0;
}

EstimateResult estimate_closed_form(const MomentSet& moments, double delta,
                                    const DenseMatrix& D_f) {
  EstimateResult res;
  res.method = Method::ClosedForm;
  DenseMatrix g0inv, dinv;
  try {
    g0inv = linalg::matrix_inverse(moments.gamma0_hat);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError(
        std::string(e.what()) +
            " (singular sample covariance; consider the lasso path)",
        e.rcond);
  }
  dinv = linalg::matrix_inverse(D_f);
  const std::size_t n = moments.gamma0_hat.rows();
  DenseMatrix a = moments.gamma1_hat * g0inv;
  a -= DenseMatrix::identity(n) * (1.0 - delta);
  res.A_hat = a * dinv;
  res.objective = frob_sq(moment_function(res.A_hat, delta, D_f, moments));
  res.iterations = 0;
  return res;
}

EstimateResult estimate_gmm(const MomentSet& moments, double delta,
                            const DenseMatrix& D_f, const DenseMatrix& W,
                            const GmmOptions& opts) {
  const std::size_t n = moments.gamma0_hat.rows();
  const DenseMatrix C = D_f * moments.gamma0_hat;
  DenseMatrix R = moments.gamma1_hat;
  R -= moments.gamma0_hat * (1.0 - delta);

  EstimateResult res;
  res.method = Method::Gmm;

  auto solve_weighted = [&](const DenseMatrix& weight) {
    if (weight.rows() == 0) {
      // identity weighting: A = R C' (C C')^-1
      const DenseMatrix M = C * C.transpose();
      const DenseMatrix rhs = C * R.transpose();  // = (R C')'
      bool deficient = false;
      const DenseMatrix xt = solve_spd_with_fallback(M, rhs, &deficient);
      res.rank_deficient = res.rank_deficient || deficient;
      return xt.transpose();
    }
    // general W: design X = I (x) C' on row-major vec(A)
    const std::size_t N = n * n;
    if (weight.rows() != N || weight.cols() != N)
      throw DimensionError("estimate_gmm: W must be n^2 x n^2");
    // H = X' W X, b = X' W vec(R)
    DenseMatrix H(N, N);
    std::vector<double> b(N, 0.0), wr(N, 0.0);
    std::vector<double> vecR(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) vecR[i * n + j] = R(i, j);
    for (std::size_t a = 0; a < N; ++a) {
      double acc = 0.0;
      for (std::size_t bdx = 0; bdx < N; ++bdx)
        acc += weight(a, bdx) * vecR[bdx];
      wr[a] = acc;
    }
    // X[(i,j),(k,l)] = delta_ik C(l,j)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const std::size_t col = k * n + l;
        double bacc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          bacc += C(l, j) * wr[k * n + j];
        b[col] = bacc;
        for (std::size_t k2 = 0; k2 < n; ++k2)
          for (std::size_t l2 = 0; l2 < n; ++l2) {
            const std::size_t col2 = k2 * n + l2;
            if (col2 > col) continue;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
              for (std::size_t j2 = 0; j2 < n; ++j2)
                acc += C(l, j) * weight(k * n + j, k2 * n + j2) * C(l2, j2);
            H(col, col2) = acc;
            H(col2, col) = acc;
          }
      }
    DenseMatrix rhs(N, 1);
    for (std::size_t a = 0; a < N; ++a) rhs(a, 0) = b[a];
    bool deficient = false;
    const DenseMatrix x = solve_spd_with_fallback(H, rhs, &deficient);
    res.rank_deficient = res.rank_deficient || deficient;
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) A(i, j) = x(i * n + j, 0);
    return A;
  };

  res.A_hat = solve_weighted(W);

  auto weighted_objective = [&](const DenseMatrix& A,
                                const DenseMatrix& weight) {
    const DenseMatrix M = moment_function(A, delta, D_f, moments);
    if (weight.rows() == 0) return frob_sq(M);
    const std::size_t N = n * n;
    std::vector<double> v(N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = M(i, j);
    double acc = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
      double row = 0.0;
      for (std::size_t b2 = 0; b2 < N; ++b2) row += weight(a, b2) * v[b2];
      acc += v[a] * row;
    }
    return acc;
  };

  if (opts.two_step) {
    if (opts.path == nullptr)
      throw SpecError("estimate_gmm: two-step weighting needs the path");
    const DenseMatrix g = moment_contributions(*opts.path, res.A_hat, delta,
                                               D_f);
    const std::size_t N = n * n;
    const std::size_t rows = g.rows();
    DenseMatrix S(N, N);
    for (std::size_t t = 0; t < rows; ++t)
      for (std::size_t a = 0; a < N; ++a) {
        const double ga = g(t, a);
        if (ga == 0.0) continue;
        for (std::size_t b2 = 0; b2 <= a; ++b2) S(a, b2) += ga * g(t, b2);
      }
    double trace = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b2 = 0; b2 < a; ++b2) S(b2, a) = S(a, b2);
      trace += S(a, a);
    }
    S *= 1.0 / static_cast<double>(rows);
    trace /= static_cast<double>(rows);
    const double ridge = 1e-8 * trace / static_cast<double>(N);
    for (std::size_t a = 0; a < N; ++a) S(a, a) += ridge;
    const DenseMatrix W2 = linalg::LuDecomposition::compute(S).inverse();
    res.A_hat = solve_weighted(W2);
    res.objective = weighted_objective(res.A_hat, W2);
    res.iterations = 2;
    return res;
  }

  res.objective = weighted_objective(res.A_hat, W);
  res.iterations = 1;
  return res;
}

DenseMatrix moment_contributions(const dynamics::SimPath& path,
                                 const DenseMatrix& A_hat, double delta,
                                 const DenseMatrix& D_f) {
  const std::size_t n = path.n;
  const std::size_t rows = path.T - 1;
  DenseMatrix b = DenseMatrix::identity(n) * (1.0 - delta);
  b += A_hat * D_f;
  DenseMatrix g(rows, n * n);
  std::vector<double> zt(n), u(n);
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t i = 0; i < n; ++i) zt[i] = path.at(t, i);
    const std::vector<double> bz = b.apply(zt);
    for (std::size_t i = 0; i < n; ++i) u[i] = path.at(t + 1, i) - bz[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(t, i * n + j) = u[i] * zt[j];
  }
  return g;
}

DenseMatrix asymptotic_variance(const dynamics::SimPath& path,
                                const DenseMatrix& A_hat, double delta,
                                const DenseMatrix& D_f, const DenseMatrix& W) {
  const std::size_t n = path.n;
  const std::size_t N = n * n;
  const DenseMatrix g = moment_contributions(path, A_hat, delta, D_f);
  const std::size_t rows = g.rows();

  // S_hat = (1/T) sum g_t g_t'
  DenseMatrix S(N, N);
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t a = 0; a < N; ++a) {
      const double ga = g(t, a);
      if (ga == 0.0) continue;
      for (std::size_t b2 = 0; b2 <= a; ++b2) S(a, b2) += ga * g(t, b2);
    }
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b2 = 0; b2 < a; ++b2) S(b2, a) = S(a, b2);
  S *= 1.0 / static_cast<double>(rows);

  // analytic Jacobian: G = -I (x) (D_f Gamma0_sample)' block-diagonal
  DenseMatrix g0(n, n);
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        g0(i, j) += path.at(t, i) * path.at(t, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = g0(i, j) / static_cast<double>(rows);
      g0(i, j) = v;
      g0(j, i) = v;
    }
  const DenseMatrix block = D_f * g0;  // G block = -block'
  DenseMatrix G(N, N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        G(i * n + j, i * n + l) = -block(l, j);

  const bool identity_w = W.rows() == 0;
  DenseMatrix GW = identity_w ? G.transpose() : G.transpose() * W;
  const DenseMatrix GWG = GW * G;
  linalg::LuDecomposition lu = linalg::LuDecomposition::compute(GWG);
  if (lu.singular())
    throw SingularMatrixError("asymptotic_variance: degenerate information");
  const DenseMatrix bread = lu.inverse();
  const DenseMatrix meat = GW * S * GW.transpose();
  return bread * meat * bread;
}

EstimateResult estimate_lasso(const MomentSet& moments, double delta,
                              const DenseMatrix& D_f, double lambda,
                              const LassoOptions& opts) {
  if (lambda < 0.0) throw SpecError("estimate_lasso: lambda must be >= 0");
  const std::size_t n = moments.gamma0_hat.rows();
  const DenseMatrix C = D_f * moments.gamma0_hat;
  DenseMatrix R = moments.gamma1_hat;
  R -= moments.gamma0_hat * (1.0 - delta);

  const DenseMatrix CCt = C * C.transpose();
  const double lipschitz = 2.0 * linalg::spectral_radius(CCt);
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  auto smooth = [&](const DenseMatrix& A) { return frob_sq(R - A * C); };
  auto l1 = [&](const DenseMatrix& A) {
    double acc = 0.0;
    for (double v : A.data()) acc += std::fabs(v);
    return acc;
  };

  DenseMatrix A = opts.warm_start ? *opts.warm_start : DenseMatrix(n, n);
  DenseMatrix Y = A;      // FISTA extrapolation point
  double t_momentum = 1.0;
  double obj = smooth(A) + lambda * l1(A);

  EstimateResult res;
  res.method = Method::Lasso;
  res.lambda = lambda;
  res.converged = false;

  std::size_t it = 0;
  for (; it < opts.max_iterations; ++it) {
    // gradient of the smooth part at Y: -2 (R - Y C) C'
    const DenseMatrix grad = (Y * C - R) * C.transpose() * 2.0;
    DenseMatrix A_next = Y;
    const double thresh = lambda * step;
    for (std::size_t k = 0; k < A_next.data().size(); ++k) {
      const double v = A_next.data()[k] - step * grad.data()[k];
      A_next.data()[k] =
          v > thresh ? v - thresh : (v < -thresh ? v + thresh : 0.0);
    }
    const double obj_next = smooth(A_next) + lambda * l1(A_next);
    if (opts.fista && obj_next <= obj) {
      const double t_next =
          0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
      DenseMatrix Y_next = A_next;
      DenseMatrix diff = A_next;
      diff -= A;
      Y_next += diff * ((t_momentum - 1.0) / t_next);
      Y = std::move(Y_next);
      t_momentum = t_next;
    } else {
      // restart momentum on non-descent
      Y = A_next;
      t_momentum = 1.0;
    }
    const double change = std::fabs(obj - obj_next);
    double param_change = 0.0;
    for (std::size_t k = 0; k < A_next.data().size(); ++k)
      param_change = std::max(
          param_change, std::fabs(A_next.data()[k] - A.data()[k]));
    const double param_scale = std::max(1.0, A_next.max_abs());
    A = std::move(A_next);
    // the objective flattens before the iterates settle in ill-conditioned
    // directions, so require both to be quiet before declaring convergence
    if (obj_next <= obj && change <= opts.tol * std::max(1.0, obj) &&
        param_change <= 100.0 * opts.tol * param_scale) {
      obj = obj_next;
      res.converged = true;
      ++it;
      break;
    }
    obj = std::min(obj, obj_next);
  }
  res.A_hat = std::move(A);
  res.objective = smooth(res.A_hat) + lambda * l1(res.A_hat);
  res.iterations = it;
  return res;
}

std::vector<EstimateResult> regularization_path(
    const MomentSet& moments, double delta, const DenseMatrix& D_f,
    const std::vector<double>& lambdas) {
  std::vector<EstimateResult> out;
  out.reserve(lambdas.size());
  LassoOptions opts;
  DenseMatrix warm;
  for (double lambda : lambdas) {
    opts.warm_start = warm.rows() > 0 ? &warm : nullptr;
    out.push_back(estimate_lasso(moments, delta, D_f, lambda, opts));
    warm = out.back().A_hat;
  }
  return out;
}

std::size_t support_size(const DenseMatrix& a, double threshold) {
  std::size_t c = 0;
  for (double v : a.data())
    if (std::fabs(v) > threshold) ++c;
  return c;
}

}  // namespace netident::estimation
