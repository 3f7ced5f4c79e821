#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netident/dynamics.hpp"
#include "netident/estimation.hpp"
#include "netident/matrix.hpp"

namespace netident::inference {

enum class StatKind { Frobenius, Spectral };

std::string stat_name(StatKind k);
StatKind stat_from_name(const std::string& name);

enum class CriticalSource { ChiSquare, MonteCarlo };

struct CriticalConfig {
  CriticalSource source = CriticalSource::MonteCarlo;
  std::size_t df = 0;        // ChiSquare; 0 means n^2
  std::size_t reps = 500;    // MonteCarlo
  std::uint64_t seed = 0;    // MonteCarlo
};

struct TestResult {
  double statistic_fro = 0.0;   // T_n
  double statistic_spec = 0.0;  // S_n
  StatKind decided_on = StatKind::Frobenius;
  CriticalSource critical_source = CriticalSource::MonteCarlo;
  std::size_t df = 0;
  std::size_t mc_reps = 0;
  std::uint64_t mc_seed = 0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;

  std::string to_jsonl() const;
};

DenseMatrix deviation_matrix(const estimation::MomentSet& moments,
                             double delta);

double statistic_frobenius(const DenseMatrix& delta_hat);

double statistic_spectral(const DenseMatrix& delta_hat);

// Upper-tail probability of chi^2_df at T * T_stat.
double chi_square_pvalue(double T_stat, std::size_t T, std::size_t df);

// (1-alpha) quantile of chi^2_df.
double chi_square_quantile(double prob, std::size_t df);

// Empirical (1-alpha) null quantile of the statistic over `reps`
// simulations of the A = 0 config. Order statistic at ceil((1-alpha)*reps),
// clamped to the minimum for alpha = 1. Parallel over replications with
// deterministic per-replication seeds.
double mc_critical_value(const dynamics::DynamicsConfig& null_cfg,
                         std::size_t T, StatKind kind, double alpha,
                         std::size_t reps, std::uint64_t seed);

// Null draws of the statistic (sorted); mc_critical_value and the
// experiment runner share this. With studentize, each draw is divided by
// its realized one-step residual variance (squared for the Frobenius
// statistic), removing scale noise from the reference distribution.
std::vector<double> mc_null_draws(const dynamics::DynamicsConfig& null_cfg,
                                  std::size_t T, StatKind kind,
                                  std::size_t reps, std::uint64_t seed,
                                  bool studentize = false);

// Full test: moments -> deviation matrix -> statistics -> decision on the
// configured statistic. Monte Carlo critical values are simulated from an
// A = 0 config matched to the path's delta and marginal variance.
TestResult run_test(const dynamics::SimPath& path, double delta, double alpha,
                    const CriticalConfig& critical,
                    StatKind decide_on = StatKind::Frobenius);

}  // namespace netident::inference
