#include "netident/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "netident/estimation.hpp"
#include "netident/linalg.hpp"
#include "netident/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netident::montecarlo {

std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Size: return "size";
    case ExperimentKind::Power: return "power";
    case ExperimentKind::LocalAlternative: return "local";
    case ExperimentKind::Degenerate: return "degenerate";
    case ExperimentKind::SpectralHeterogeneity: return "spectral";
    case ExperimentKind::Accuracy: return "accuracy";
  }
  throw SpecError("kind_name: bad kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "size") return ExperimentKind::Size;
  if (name == "power") return ExperimentKind::Power;
  if (name == "local") return ExperimentKind::LocalAlternative;
  if (name == "degenerate") return ExperimentKind::Degenerate;
  if (name == "spectral") return ExperimentKind::SpectralHeterogeneity;
  if (name == "accuracy") return ExperimentKind::Accuracy;
  throw SpecError("unknown experiment kind: " + name);
}

double spectral_error(const std::vector<std::complex<double>>& truth,
                      const std::vector<std::complex<double>>& estimate) {
  if (truth.size() != estimate.size())
    throw DimensionError("spectral_error: eigenvalue count mismatch");
  // both inputs arrive modulus-sorted; greedy nearest matching resolves
  // modulus ties without depending on the tie-break order
  std::vector<bool> used(estimate.size(), false);
  double worst = 0.0;
  for (const std::complex<double>& t : truth) {
    std::size_t best = estimate.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < estimate.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(estimate[j] - t);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t kind_tag(ExperimentKind k) {
  return 0x6b696e64ULL + static_cast<std::uint64_t>(k);
}

ReplicationRecord run_one(const ExperimentConfig& cfg, std::size_t n,
                          std::size_t T, std::size_t rep) {
  ReplicationRecord rec;
  rec.rep_index = rep;
  rec.n = n;
  rec.T = T;
  rec.seed = derive_seed({cfg.master_seed, kind_tag(cfg.kind), n, T, rep});
  try {
    DenseMatrix A_true;
    if (cfg.kind != ExperimentKind::Size) {
      networks::NetworkSpec spec = cfg.network;
      spec.n = n;
      spec.seed = derive_seed({cfg.master_seed, kind_tag(cfg.kind), n, T, rep,
                               0x6e6574ULL});
      spec.target_radius = 1.0;
      const double rho = cfg.kind == ExperimentKind::LocalAlternative
                             ? cfg.c / std::sqrt(static_cast<double>(T))
                             : cfg.rho;
      A_true = networks::generate(spec) * rho;
    }

    dynamics::DynamicsConfig dcfg;
    dcfg.n = n;
    dcfg.delta = cfg.delta;
    dcfg.A = A_true;
    dcfg.link = cfg.link;
    dcfg.sigma = cfg.sigma;
    dcfg.seed = rec.seed;
    const dynamics::SimPath path = dynamics::simulate(dcfg, T);

    const estimation::MomentSet moments = estimation::sample_moments(path);
    const DenseMatrix dev = inference::deviation_matrix(moments, cfg.delta);

    if (cfg.kind == ExperimentKind::Accuracy) {
      // estimation-only experiment; skip the (expensive) null simulation
      rec.statistic = cfg.stat == inference::StatKind::Frobenius
                          ? inference::statistic_frobenius(dev)
                          : inference::statistic_spectral(dev);
      rec.reject = false;
    } else {
      inference::CriticalConfig crit = cfg.critical;
      if (crit.seed == 0)
        crit.seed = derive_seed({rec.seed, 0x63726974ULL});
      const inference::TestResult tr =
          inference::run_test(path, cfg.delta, cfg.alpha, crit, cfg.stat);
      rec.statistic = cfg.stat == inference::StatKind::Frobenius
                          ? tr.statistic_fro
                          : tr.statistic_spec;
      rec.reject = tr.reject;
    }

    const double df0 = cfg.link.deriv(0.0);
    const DenseMatrix D_f = DenseMatrix::identity(n) * df0;
    const estimation::EstimateResult est =
        estimation::estimate_closed_form(moments, cfg.delta, D_f);

    DenseMatrix diff = est.A_hat;
    if (A_true.rows() > 0) diff -= A_true;
    rec.fro_error = linalg::frobenius_norm(diff);
    double sum = 0.0, sq = 0.0;
    for (double v : diff.data()) {
      sum += v;
      sq += v * v;
    }
    const double cells = static_cast<double>(n) * static_cast<double>(n);
    rec.bias = sum / cells;
    rec.rmse = std::sqrt(sq / cells);

    std::vector<std::complex<double>> lam_true(n, {0.0, 0.0});
    if (A_true.rows() > 0)
      lam_true = linalg::eigen_decompose(A_true).eigenvalues;
    const std::vector<std::complex<double>> lam_est =
        linalg::eigen_decompose(est.A_hat).eigenvalues;
    rec.spec_error = spectral_error(lam_true, lam_est);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.statistic = rec.fro_error = rec.spec_error = rec.bias = rec.rmse =
        kNan;
  }
  return rec;
}

int thread_count(std::size_t jobs) {
#ifdef _OPENMP
  return jobs > 0 ? static_cast<int>(jobs) : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNan;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNan;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw SpecError("run_experiment: reps must be >= 1");
  if (cfg.grid.empty()) throw SpecError("run_experiment: empty grid");
  for (const auto& [n, T] : cfg.grid)
    if (n < 1 || T < 4)
      throw SpecError("run_experiment: grid cells need n >= 1 and T >= 4");

  ExperimentResult out;
  out.records.resize(cfg.grid.size() * cfg.reps);
  const int nt = thread_count(cfg.jobs);
  for (std::size_t ci = 0; ci < cfg.grid.size(); ++ci) {
    const auto [n, T] = cfg.grid[ci];
    const std::size_t base = ci * cfg.reps;
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long long r = 0; r < static_cast<long long>(cfg.reps); ++r)
      out.records[base + static_cast<std::size_t>(r)] =
          run_one(cfg, n, T, static_cast<std::size_t>(r));
  }
  out.summary = summarize(out.records);
  return out;
}

ExperimentSummary summarize(const std::vector<ReplicationRecord>& records) {
  ExperimentSummary out;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (const ReplicationRecord& r : records) {
    const std::pair<std::size_t, std::size_t> key{r.n, r.T};
    if (std::find(cells.begin(), cells.end(), key) == cells.end())
      cells.push_back(key);
  }
  for (const auto& [n, T] : cells) {
    CellSummary cell;
    cell.n = n;
    cell.T = T;
    std::size_t rejects = 0;
    std::vector<double> fro, spec, bias, rmse;
    for (const ReplicationRecord& r : records) {
      if (r.n != n || r.T != T) continue;
      if (r.failed) {
        ++cell.failures;
        continue;
      }
      ++cell.reps;
      if (r.reject) ++rejects;
      fro.push_back(r.fro_error);
      spec.push_back(r.spec_error);
      bias.push_back(r.bias);
      rmse.push_back(r.rmse);
    }
    if (cell.reps == 0) continue;  // empty cell omitted
    const double p = static_cast<double>(rejects) /
                     static_cast<double>(cell.reps);
    cell.rejection_rate = p;
    cell.mc_standard_error =
        std::sqrt(p * (1.0 - p) / static_cast<double>(cell.reps));
    cell.median_fro = median_of(fro);
    cell.mean_fro = mean_of(fro);
    cell.median_spec = median_of(spec);
    cell.mean_spec = mean_of(spec);
    cell.median_bias = median_of(bias);
    cell.mean_bias = mean_of(bias);
    cell.median_rmse = median_of(rmse);
    cell.mean_rmse = mean_of(rmse);
    out.cells.push_back(cell);
  }
  return out;
}

std::vector<HeterogeneityRow> spectral_heterogeneity_study(
    const std::vector<networks::NetworkSpec>& families, double rho,
    double sigma, const HeterogeneityOptions& opts) {
  std::vector<HeterogeneityRow> rows;
  for (const networks::NetworkSpec& spec : families) {
    const DenseMatrix a = networks::generate(spec);
    const networks::SpectralSummary s = networks::spectral_summary(a);
    HeterogeneityRow row;
    row.family = spec.family;
    row.dispersion = s.dispersion;
    row.range = s.range;
    row.radius = s.radius;
    row.cov_std = dynamics::covariance_heterogeneity(
        dynamics::latent_covariance(a, rho, sigma));
    if (opts.reps > 0) {
      ExperimentConfig cfg;
      cfg.kind = ExperimentKind::Power;
      cfg.grid = {{spec.n, opts.T}};
      cfg.network = spec;
      cfg.rho = opts.sim_rho;
      cfg.delta = opts.delta;
      cfg.sigma = sigma;
      cfg.reps = opts.reps;
      cfg.alpha = opts.alpha;
      cfg.critical = opts.critical;
      cfg.master_seed = derive_seed({opts.seed, static_cast<std::uint64_t>(
                                                    spec.family)});
      cfg.jobs = opts.jobs;
      const ExperimentResult res = run_experiment(cfg);
      if (!res.summary.cells.empty()) {
        row.rejection_rate = res.summary.cells.front().rejection_rate;
        row.sim_reps = res.summary.cells.front().reps;
      }
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const HeterogeneityRow& a, const HeterogeneityRow& b) {
              return a.dispersion < b.dispersion;
            });
  return rows;
}

std::string experiment_fingerprint(const ExperimentConfig& cfg) {
  auto dbl = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  std::uint64_t h = derive_seed(
      {static_cast<std::uint64_t>(cfg.kind), dbl(cfg.rho), dbl(cfg.c),
       dbl(cfg.delta), dbl(cfg.sigma), cfg.reps, dbl(cfg.alpha),
       static_cast<std::uint64_t>(cfg.stat),
       static_cast<std::uint64_t>(cfg.critical.source), cfg.critical.df,
       cfg.critical.reps, cfg.master_seed,
       static_cast<std::uint64_t>(cfg.network.family), cfg.network.n,
       dbl(cfg.network.density), cfg.network.blocks,
       dbl(cfg.network.weight_scale),
       static_cast<std::uint64_t>(cfg.link.kind)});
  for (const auto& [n, T] : cfg.grid) h = derive_seed({h, n, T});
  for (double t : cfg.link.theta) h = derive_seed({h, dbl(t)});
  if (cfg.network.target_radius)
    h = derive_seed({h, dbl(*cfg.network.target_radius)});
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot open output file: " + file);
  return out;
}

void write_header(std::ofstream& out, const ExperimentConfig& cfg) {
  out << "# fingerprint=" << experiment_fingerprint(cfg)
      << " version=0.1.0 kind=" << kind_name(cfg.kind)
      << " delta=" << fmt17(cfg.delta) << " rho=" << fmt17(cfg.rho)
      << " sigma=" << fmt17(cfg.sigma) << " alpha=" << fmt17(cfg.alpha)
      << " seed=" << cfg.master_seed << "\n";
}

}  // namespace

void write_records_csv(const std::string& file, const ExperimentConfig& cfg,
                       const std::vector<ReplicationRecord>& records) {
  std::ofstream out = open_out(file);
  write_header(out, cfg);
  out << "kind,n,T,rep,seed,reject,stat,fro_error,spec_error,bias,rmse\n";
  for (const ReplicationRecord& r : records) {
    out << kind_name(cfg.kind) << ',' << r.n << ',' << r.T << ','
        << r.rep_index << ',' << r.seed << ',' << (r.reject ? 1 : 0) << ','
        << fmt17(r.statistic) << ',' << fmt17(r.fro_error) << ','
        << fmt17(r.spec_error) << ',' << fmt17(r.bias) << ','
        << fmt17(r.rmse) << "\n";
  }
}

void write_summary_csv(const std::string& file, const ExperimentConfig& cfg,
                       const ExperimentSummary& summary) {
  std::ofstream out = open_out(file);
  write_header(out, cfg);
  out << "n,T,reps,failures,rejection_rate,mc_se,median_fro,mean_fro,"
         "median_spec,mean_spec,median_bias,mean_bias,median_rmse,mean_rmse\n";
  for (const CellSummary& c : summary.cells) {
    out << c.n << ',' << c.T << ',' << c.reps << ',' << c.failures << ','
        << fmt17(c.rejection_rate) << ',' << fmt17(c.mc_standard_error)
        << ',' << fmt17(c.median_fro) << ',' << fmt17(c.mean_fro) << ','
        << fmt17(c.median_spec) << ',' << fmt17(c.mean_spec) << ','
        << fmt17(c.median_bias) << ',' << fmt17(c.mean_bias) << ','
        << fmt17(c.median_rmse) << ',' << fmt17(c.mean_rmse) << "\n";
  }
}

void write_plot_csv(const std::string& file, const ExperimentConfig& cfg,
                    const ExperimentSummary& summary) {
  std::ofstream out = open_out(file);
  write_header(out, cfg);
  out << "x,y,series\n";
  for (const CellSummary& c : summary.cells)
    out << c.T << ',' << fmt17(c.rejection_rate) << ",n=" << c.n << "\n";
}

void write_heterogeneity_csv(const std::string& file,
                             const std::vector<HeterogeneityRow>& rows) {
  std::ofstream out = open_out(file);
  out << "family,dispersion,range,radius,cov_std,rejection_rate,sim_reps\n";
  for (const HeterogeneityRow& r : rows) {
    out << networks::family_name(r.family) << ',' << fmt17(r.dispersion)
        << ',' << fmt17(r.range) << ',' << fmt17(r.radius) << ','
        << fmt17(r.cov_std) << ',' << fmt17(r.rejection_rate) << ','
        << r.sim_reps << "\n";
  }
}

}  // namespace netident::montecarlo
