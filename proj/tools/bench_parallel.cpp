// Compares the parallel kernels against their serial reference
// implementations: dense multiply and the replication runner.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "netident/matrix.hpp"
#include "netident/montecarlo.hpp"
#include "netident/rng.hpp"

using namespace netident;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void bench_multiply(std::size_t n, int reps) {
  Rng rng(42);
  DenseMatrix a(n, n), b(n, n);
  for (double& v : a.data()) v = rng.normal();
  for (double& v : b.data()) v = rng.normal();

  auto t0 = std::chrono::steady_clock::now();
  DenseMatrix r_serial(n, n);
  for (int i = 0; i < reps; ++i)
    r_serial = DenseMatrix::multiply_serial(a, b);
  const double ts = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  DenseMatrix r_par(n, n);
  for (int i = 0; i < reps; ++i) r_par = DenseMatrix::multiply(a, b);
  const double tp = seconds_since(t0);

  double max_diff = 0.0;
  for (std::size_t k = 0; k < r_serial.data().size(); ++k)
    max_diff = std::max(max_diff,
                        std::abs(r_serial.data()[k] - r_par.data()[k]));
  std::printf("multiply n=%zu reps=%d: serial %.3fs parallel %.3fs "
              "speedup %.2fx max_diff %.1e\n",
              n, reps, ts, tp, ts / tp, max_diff);
}

void bench_experiment() {
  montecarlo::ExperimentConfig cfg;
  cfg.kind = montecarlo::ExperimentKind::Accuracy;
  cfg.grid = {{25, 200}};
  cfg.network.family = networks::Family::Sparse;
  cfg.delta = 0.5;
  cfg.rho = 0.45;
  cfg.reps = 64;
  cfg.master_seed = 7;

  cfg.jobs = 1;
  auto t0 = std::chrono::steady_clock::now();
  const montecarlo::ExperimentResult serial = montecarlo::run_experiment(cfg);
  const double ts = seconds_since(t0);

  cfg.jobs = 0;
  t0 = std::chrono::steady_clock::now();
  const montecarlo::ExperimentResult par = montecarlo::run_experiment(cfg);
  const double tp = seconds_since(t0);

  bool identical = serial.records.size() == par.records.size();
  for (std::size_t i = 0; identical && i < serial.records.size(); ++i)
    identical = serial.records[i].seed == par.records[i].seed &&
                serial.records[i].fro_error == par.records[i].fro_error &&
                serial.records[i].statistic == par.records[i].statistic;
  std::printf("experiment reps=%zu: serial %.3fs parallel %.3fs "
              "speedup %.2fx identical=%s\n",
              cfg.reps, ts, tp, ts / tp, identical ? "yes" : "no");
}

}  // namespace

int main() {
  bench_multiply(256, 20);
  bench_multiply(512, 5);
  bench_experiment();
  return 0;
}
