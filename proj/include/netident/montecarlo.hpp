#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netident/dynamics.hpp"
#include "netident/inference.hpp"
#include "netident/networks.hpp"

namespace netident::montecarlo {

enum class ExperimentKind {
  Size,
  Power,
  LocalAlternative,
  Degenerate,
  SpectralHeterogeneity,
  Accuracy,
};

std::string kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Size;
  std::vector<std::pair<std::size_t, std::size_t>> grid;  // (n, T)
  networks::NetworkSpec network;  // template; n overridden per cell
  double rho = 0.45;              // scale applied to the radius-1 network
  double c = 1.0;                 // LocalAlternative: rho = c / sqrt(T)
  double delta = 0.5;
  double sigma = 1.0;
  dynamics::LinkFunction link;
  std::size_t reps = 200;
  double alpha = 0.05;
  inference::StatKind stat = inference::StatKind::Frobenius;
  inference::CriticalConfig critical;
  std::uint64_t master_seed = 1;
  std::size_t jobs = 0;  // 0 = all hardware threads, 1 = serial
};

struct ReplicationRecord {
  std::size_t rep_index = 0;
  std::size_t n = 0;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  bool reject = false;
  double statistic = 0.0;
  double fro_error = 0.0;
  double spec_error = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  bool failed = false;
  std::string error;
};

struct CellSummary {
  std::size_t n = 0;
  std::size_t T = 0;
  std::size_t reps = 0;      // successful replications
  std::size_t failures = 0;
  double rejection_rate = 0.0;
  double mc_standard_error = 0.0;  // sqrt(p(1-p)/reps)
  double median_fro = 0.0, mean_fro = 0.0;
  double median_spec = 0.0, mean_spec = 0.0;
  double median_bias = 0.0, mean_bias = 0.0;
  double median_rmse = 0.0, mean_rmse = 0.0;
};

struct ExperimentSummary {
  std::vector<CellSummary> cells;
};

struct ExperimentResult {
  ExperimentSummary summary;
  std::vector<ReplicationRecord> records;
};

// Max modulus of the pairwise gap between two eigenvalue sets, paired by
// sorted modulus with a greedy nearest-match fallback when moduli tie.
double spectral_error(const std::vector<std::complex<double>>& truth,
                      const std::vector<std::complex<double>>& estimate);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

ExperimentSummary summarize(const std::vector<ReplicationRecord>& records);

struct HeterogeneityRow {
  networks::Family family = networks::Family::Sparse;
  double dispersion = 0.0;
  double range = 0.0;
  double radius = 0.0;
  double cov_std = 0.0;         // covariance_heterogeneity(Sigma_U)
  double rejection_rate = 0.0;  // 0 when sim_reps = 0
  std::size_t sim_reps = 0;
};

struct HeterogeneityOptions {
  std::size_t T = 200;
  double delta = 0.5;
  double sim_rho = 0.45;  // applied to the radius-1 network when simulating
  std::size_t reps = 0;   // 0 skips the rejection-rate simulation
  double alpha = 0.05;
  inference::CriticalConfig critical;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
};

// Per family: dispersion/range of the calibrated network, heterogeneity of
// the implied latent covariance at the given rho, and (optionally) the
// empirical rejection rate. Rows ordered by dispersion.
std::vector<HeterogeneityRow> spectral_heterogeneity_study(
    const std::vector<networks::NetworkSpec>& families, double rho,
    double sigma, const HeterogeneityOptions& opts = HeterogeneityOptions{});

std::string experiment_fingerprint(const ExperimentConfig& cfg);

void write_records_csv(const std::string& file, const ExperimentConfig& cfg,
                       const std::vector<ReplicationRecord>& records);
void write_summary_csv(const std::string& file, const ExperimentConfig& cfg,
                       const ExperimentSummary& summary);
// Power-curve plot data: x = T, y = rejection rate, series = n.
void write_plot_csv(const std::string& file, const ExperimentConfig& cfg,
                    const ExperimentSummary& summary);
void write_heterogeneity_csv(const std::string& file,
                             const std::vector<HeterogeneityRow>& rows);

}  // namespace netident::montecarlo
