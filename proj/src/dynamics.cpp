#include "netident/dynamics.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netident/linalg.hpp"
#include "netident/rng.hpp"

namespace netident::dynamics {

std::string link_name(LinkKind k) {
  switch (k) {
    case LinkKind::Identity: return "identity";
    case LinkKind::Tanh: return "tanh";
    case LinkKind::Logistic: return "logistic";
    case LinkKind::Softplus: return "softplus";
  }
  return "?";
}

LinkKind link_from_name(const std::string& name) {
  if (name == "identity") return LinkKind::Identity;
  if (name == "tanh") return LinkKind::Tanh;
  if (name == "logistic") return LinkKind::Logistic;
  if (name == "softplus") return LinkKind::Softplus;
  throw SpecError("unknown link function: " + name);
}

double LinkFunction::eval(double z) const {
  const double a = slope();
  switch (kind) {
    case LinkKind::Identity: return z;
    case LinkKind::Tanh: return std::tanh(a * z);
    case LinkKind::Logistic: return 1.0 / (1.0 + std::exp(-a * z));
    case LinkKind::Softplus:
      // (1/a) log(1 + e^(a z)), overflow-safe
      {
        const double x = a * z;
        return (x > 30.0 ? x : std::log1p(std::exp(x))) / a;
      }
  }
  return z;
}

double LinkFunction::deriv(double z) const {
  const double a = slope();
  switch (kind) {
    case LinkKind::Identity: return 1.0;
    case LinkKind::Tanh: {
      const double t = std::tanh(a * z);
      return a * (1.0 - t * t);
    }
    case LinkKind::Logistic: {
      const double s = 1.0 / (1.0 + std::exp(-a * z));
      return a * s * (1.0 - s);
    }
    case LinkKind::Softplus:
      return 1.0 / (1.0 + std::exp(-a * z));
  }
  return 1.0;
}

std::vector<double> link_eval(const LinkFunction& link,
                              const std::vector<double>& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = link.eval(z[i]);
  return out;
}

DenseMatrix link_jacobian(const LinkFunction& link,
                          const std::vector<double>& z) {
  DenseMatrix d(z.size(), z.size());
  for (std::size_t i = 0; i < z.size(); ++i) d(i, i) = link.deriv(z[i]);
  return d;
}

double AggregateShock::value(long t) const {
  switch (kind) {
    case ShockKind::None: return 0.0;
    case ShockKind::Constant: return level;
    case ShockKind::Sinusoid:
      return amplitude *
             std::sin(6.283185307179586 * static_cast<double>(t) / period);
  }
  return 0.0;
}

namespace {

std::size_t config_dim(const DynamicsConfig& cfg) {
  if (cfg.A.rows() > 0) return cfg.A.rows();
  return cfg.n;
}

void mix_double(std::uint64_t& state, double v) {
  state ^= std::bit_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL +
           (state << 6) + (state >> 2);
  (void)splitmix64(state);
}

}  // namespace

std::string config_fingerprint(const DynamicsConfig& cfg) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  mix_double(h, static_cast<double>(config_dim(cfg)));
  mix_double(h, cfg.delta);
  mix_double(h, static_cast<double>(cfg.link.kind));
  mix_double(h, cfg.link.slope());
  mix_double(h, cfg.sigma);
  mix_double(h, static_cast<double>(cfg.aggregate_shock.kind));
  mix_double(h, cfg.aggregate_shock.level);
  mix_double(h, cfg.aggregate_shock.amplitude);
  mix_double(h, cfg.aggregate_shock.period);
  mix_double(h, static_cast<double>(cfg.burn_in));
  mix_double(h, static_cast<double>(cfg.seed));
  for (double v : cfg.A.data()) mix_double(h, v);
  for (double v : cfg.omega.data()) mix_double(h, v);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

SimPath simulate(const DynamicsConfig& cfg, std::size_t T) {
  const std::size_t n = config_dim(cfg);
  if (n == 0) throw SpecError("simulate: dimension not set");
  if (T < 2) throw SpecError("simulate: T must be >= 2");
  if (cfg.A.rows() > 0 && (cfg.A.rows() != n || cfg.A.cols() != n))
    throw DimensionError("simulate: A dimension mismatch");

  const bool have_A = cfg.A.rows() > 0 && !cfg.A.is_zero();

  // shock factor: explicit omega wins over scalar sigma
  DenseMatrix chol;
  bool noisy = false;
  bool scalar_noise = false;
  double noise_scale = 0.0;
  if (cfg.omega.rows() > 0) {
    if (cfg.omega.rows() != n || cfg.omega.cols() != n)
      throw DimensionError("simulate: omega dimension mismatch");
    if (!linalg::is_symmetric(cfg.omega, 1e-10 * (1.0 + cfg.omega.max_abs())))
      throw SpecError("simulate: omega must be symmetric");
    if (!cfg.omega.is_zero()) {
      // diagonal-isotropic fast path
      bool iso = true;
      const double d0 = cfg.omega(0, 0);
      for (std::size_t i = 0; i < n && iso; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (cfg.omega(i, j) != (i == j ? d0 : 0.0)) {
            iso = false;
            break;
          }
      if (iso) {
        scalar_noise = true;
        noise_scale = std::sqrt(d0);
      } else {
        chol = linalg::cholesky_psd(cfg.omega);
      }
      noisy = true;
    }
  } else if (cfg.sigma > 0.0) {
    scalar_noise = true;
    noise_scale = cfg.sigma;
    noisy = true;
  }

  Rng rng(derive_seed({cfg.seed, 0x73696dULL}));

  std::vector<double> z(n, 0.0);
  std::size_t burn = cfg.burn_in;
  if (cfg.initial_state) {
    if (cfg.initial_state->size() != n)
      throw DimensionError("simulate: initial_state length mismatch");
    z = *cfg.initial_state;
    burn = 0;
  }

  SimPath path;
  path.n = n;
  path.T = T;
  path.states.resize(T * n);
  path.t_offset = static_cast<long>(burn);
  path.seed = cfg.seed;
  path.fingerprint = config_fingerprint(cfg);

  std::vector<double> eps(n), fz(n), next(n);
  const double keep = 1.0 - cfg.delta;
  for (std::size_t t = 0; t < burn + T; ++t) {
    const double s = cfg.aggregate_shock.value(static_cast<long>(t));
    if (have_A) {
      for (std::size_t i = 0; i < n; ++i) fz[i] = cfg.link.eval(z[i]);
      next = cfg.A.apply(fz);
    } else {
      std::fill(next.begin(), next.end(), 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) next[i] += keep * z[i] + s;
    if (noisy) {
      for (std::size_t i = 0; i < n; ++i) eps[i] = rng.normal();
      if (scalar_noise) {
        for (std::size_t i = 0; i < n; ++i) next[i] += noise_scale * eps[i];
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j <= i; ++j) acc += chol(i, j) * eps[j];
          next[i] += acc;
        }
      }
    }
    z.swap(next);
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::fabs(v));
    if (zmax > 1e8)
      throw ExplosionError("simulate: state exploded at step " +
                               std::to_string(t),
                           static_cast<long>(t));
    if (t >= burn) {
      const std::size_t row = t - burn;
      for (std::size_t i = 0; i < n; ++i) path.states[row * n + i] = z[i];
    }
  }
  return path;
}

DenseMatrix effective_operator(const DynamicsConfig& cfg,
                               const std::vector<double>& z_star) {
  const std::size_t n = config_dim(cfg);
  if (z_star.size() != n)
    throw DimensionError("effective_operator: z_star length mismatch");
  DenseMatrix b = DenseMatrix::identity(n) * (1.0 - cfg.delta);
  if (cfg.A.rows() > 0) {
    const DenseMatrix df = link_jacobian(cfg.link, z_star);
    b += cfg.A * df;
  }
  return b;
}

std::pair<DenseMatrix, DenseMatrix> implied_covariances(
    const DenseMatrix& B, const DenseMatrix& Omega) {
  const DenseMatrix gamma0 = linalg::solve_discrete_lyapunov(B, Omega);
  return {gamma0, B * gamma0};
}

DenseMatrix latent_covariance(const DenseMatrix& A, double rho, double sigma) {
  require_square(A, "latent_covariance");
  const std::size_t n = A.rows();
  if (rho != 0.0 && !A.is_zero()) {
    const double r = std::fabs(rho) * linalg::spectral_radius(A);
    if (r >= 1.0)
      throw InstabilityError("latent_covariance: rho * spectral_radius(A) = " +
                                 std::to_string(r) + " >= 1",
                             r);
  }
  const DenseMatrix m = DenseMatrix::identity(n) - rho * A;
  const DenseMatrix minv = linalg::matrix_inverse(m);
  DenseMatrix sig = minv * minv.transpose();
  sig *= sigma * sigma;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (sig(i, j) + sig(j, i));
      sig(i, j) = v;
      sig(j, i) = v;
    }
  return sig;
}

double covariance_heterogeneity(const DenseMatrix& sigma) {
  require_square(sigma, "covariance_heterogeneity");
  const std::size_t n = sigma.rows();
  if (n < 2)
    throw DimensionError("covariance_heterogeneity: need n >= 2");
  double mean = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      mean += sigma(i, j);
      ++count;
    }
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      var += (sigma(i, j) - mean) * (sigma(i, j) - mean);
  return std::sqrt(var / static_cast<double>(count));
}

void write_path_csv(const SimPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error("write_path_csv: cannot open " + file);
  out << "# fingerprint=" << path.fingerprint << " seed=" << path.seed
      << " t_offset=" << path.t_offset << "\n";
  out << "t";
  for (std::size_t i = 0; i < path.n; ++i) out << ",z" << (i + 1);
  out << "\n";
  char buf[32];
  for (std::size_t t = 0; t < path.T; ++t) {
    out << (path.t_offset + static_cast<long>(t));
    for (std::size_t i = 0; i < path.n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", path.at(t, i));
      out << ',' << buf;
    }
    out << "\n";
  }
}

SimPath read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("read_path_csv: cannot open " + file);
  SimPath path;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        if (tok.rfind("seed=", 0) == 0)
          path.seed = std::stoull(tok.substr(5));
        else if (tok.rfind("t_offset=", 0) == 0)
          path.t_offset = std::stol(tok.substr(9));
        else if (tok.rfind("fingerprint=", 0) == 0)
          path.fingerprint = tok.substr(12);
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("t,", 0) != 0)
        throw SpecError("read_path_csv: malformed header in " + file);
      path.n = static_cast<std::size_t>(
          std::count(line.begin(), line.end(), ',') );
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ',')) continue;  // t column
    std::size_t got = 0;
    while (std::getline(row, cell, ',')) {
      path.states.push_back(std::stod(cell));
      ++got;
    }
    if (got != path.n)
      throw SpecError("read_path_csv: row width mismatch in " + file);
  }
  if (!header_seen || path.n == 0)
    throw SpecError("read_path_csv: no data in " + file);
  path.T = path.states.size() / path.n;
  if (path.T < 2) throw InsufficientDataError("read_path_csv: need T >= 2");
  return path;
}

}  // namespace netident::dynamics
