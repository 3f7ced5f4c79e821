#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "netident/estimation.hpp"
#include "netident/inference.hpp"
#include "netident/io.hpp"
#include "netident/montecarlo.hpp"

namespace {

using namespace netident;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitDegenerate = 4;

std::uint64_t env_seed_fallback(std::uint64_t seed) {
  if (seed != 0) return seed;
  if (const char* env = std::getenv("NETIDENT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw SpecError("NETIDENT_SEED is not an integer");
    }
  }
  return seed;
}

std::string out_path(const io::CliConfig& cfg, const std::string& name) {
  return cfg.output_dir + "/" + name;
}

DenseMatrix resolve_interaction_matrix(const io::CliConfig& cfg) {
  if (cfg.a_file) return io::read_matrix_csv(*cfg.a_file);
  if (cfg.has_network) {
    networks::NetworkSpec spec = cfg.network;
    if (cfg.dyn.n > 0) spec.n = cfg.dyn.n;
    return networks::generate(spec);
  }
  return DenseMatrix{};
}

int cmd_simulate(const std::string& config_file, std::uint64_t seed_flag,
                 std::size_t T_flag, const std::string& out_flag) {
  io::CliConfig cfg = io::load_cli_config(config_file);
  cfg.dyn.A = resolve_interaction_matrix(cfg);
  if (cfg.dyn.n == 0) {
    if (cfg.dyn.A.rows() == 0)
      throw SpecError("simulate: set [dynamics].n or provide a matrix");
    cfg.dyn.n = cfg.dyn.A.rows();
  }
  if (seed_flag != 0) cfg.dyn.seed = seed_flag;
  cfg.dyn.seed = env_seed_fallback(cfg.dyn.seed);
  const std::size_t T = T_flag > 0 ? T_flag : cfg.T;

  const dynamics::SimPath path = dynamics::simulate(cfg.dyn, T);
  const std::string file =
      out_flag.empty() ? out_path(cfg, "path.csv") : out_flag;
  dynamics::write_path_csv(path, file);
  std::cout << "{\"command\":\"simulate\",\"n\":" << path.n
            << ",\"T\":" << path.T << ",\"seed\":" << path.seed
            << ",\"fingerprint\":\"" << path.fingerprint << "\",\"file\":\""
            << file << "\"}\n";
  return kExitOk;
}

int cmd_estimate(const std::string& data_file, const std::string& config_file,
                 const std::string& method, double lambda, double delta,
                 const std::string& out_flag) {
  io::CliConfig cfg;
  if (!config_file.empty()) cfg = io::load_cli_config(config_file);
  const dynamics::SimPath path = dynamics::read_path_csv(data_file);
  const estimation::MomentSet moments =
      estimation::sample_moments(path, cfg.dyn.aggregate_shock, delta);
  const DenseMatrix D_f =
      DenseMatrix::identity(path.n) * cfg.dyn.link.deriv(0.0);

  estimation::EstimateResult res;
  if (method == "closed") {
    res = estimation::estimate_closed_form(moments, delta, D_f);
  } else if (method == "gmm") {
    estimation::GmmOptions opts;
    opts.two_step = true;
    opts.path = &path;
    res = estimation::estimate_gmm(moments, delta, D_f, DenseMatrix{}, opts);
  } else if (method == "lasso") {
    res = estimation::estimate_lasso(moments, delta, D_f, lambda);
  } else {
    throw SpecError("unknown method '" + method + "'");
  }

  const std::string file =
      out_flag.empty() ? out_path(cfg, "A_hat.csv") : out_flag;
  io::write_matrix_csv(res.A_hat, file);
  std::ostringstream meta;
  meta.precision(12);
  meta << "{\"command\":\"estimate\",\"method\":\"" << method
       << "\",\"delta\":" << delta << ",\"lambda\":" << res.lambda
       << ",\"objective\":" << res.objective
       << ",\"iterations\":" << res.iterations << ",\"converged\":"
       << (res.converged ? "true" : "false") << ",\"rank_deficient\":"
       << (res.rank_deficient ? "true" : "false")
       << ",\"support\":" << estimation::support_size(res.A_hat)
       << ",\"file\":\"" << file << "\"}";
  std::cout << meta.str() << "\n";
  std::ofstream jsonl(out_path(cfg, "estimate.jsonl"), std::ios::app);
  if (jsonl) jsonl << meta.str() << "\n";
  return kExitOk;
}

int cmd_test(const std::string& data_file, double alpha,
             const std::string& stat, const std::string& critical,
             std::size_t reps, std::size_t df, double delta,
             std::uint64_t seed) {
  const dynamics::SimPath path = dynamics::read_path_csv(data_file);
  inference::CriticalConfig crit;
  if (critical == "chi2")
    crit.source = inference::CriticalSource::ChiSquare;
  else if (critical == "mc")
    crit.source = inference::CriticalSource::MonteCarlo;
  else
    throw SpecError("critical must be chi2 or mc");
  crit.reps = reps;
  crit.df = df;
  crit.seed = env_seed_fallback(seed);
  const inference::TestResult res = inference::run_test(
      path, delta, alpha, crit, inference::stat_from_name(stat));
  std::cout << res.to_jsonl() << "\n";
  return kExitOk;
}

int cmd_spectra(const std::string& config_file,
                const std::string& matrix_file) {
  DenseMatrix a;
  if (!matrix_file.empty()) {
    a = io::read_matrix_csv(matrix_file);
  } else if (!config_file.empty()) {
    const io::CliConfig cfg = io::load_cli_config(config_file);
    if (!cfg.has_network && !cfg.a_file)
      throw SpecError("spectra: config has no [network] section or a_file");
    a = resolve_interaction_matrix(cfg);
  } else {
    throw SpecError("spectra: provide --config or --matrix");
  }
  const networks::SpectralSummary s = networks::spectral_summary(a);
  std::ostringstream out;
  out.precision(12);
  out << "{\"command\":\"spectra\",\"n\":" << a.rows()
      << ",\"dispersion\":" << s.dispersion << ",\"range\":" << s.range
      << ",\"radius\":" << s.radius << ",\"eigenvalues\":[";
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
    out << (k ? "," : "") << "[" << s.eigenvalues[k].real() << ","
        << s.eigenvalues[k].imag() << "]";
  out << "]}";
  std::cout << out.str() << "\n";
  return kExitOk;
}

int cmd_mc(const std::string& config_file, const std::string& kind_flag,
           std::size_t jobs_flag) {
  io::CliConfig cfg = io::load_cli_config(config_file);
  montecarlo::ExperimentConfig& e = cfg.experiment;
  if (!kind_flag.empty()) e.kind = montecarlo::kind_from_name(kind_flag);
  if (jobs_flag > 0) e.jobs = jobs_flag;
  e.master_seed = env_seed_fallback(e.master_seed);
  if (e.grid.empty()) throw SpecError("mc: [experiment].grid is required");

  const montecarlo::ExperimentResult res = montecarlo::run_experiment(e);
  const std::string tag = montecarlo::kind_name(e.kind);
  montecarlo::write_records_csv(out_path(cfg, tag + "_records.csv"), e,
                                res.records);
  montecarlo::write_summary_csv(out_path(cfg, tag + "_summary.csv"), e,
                                res.summary);
  montecarlo::write_plot_csv(out_path(cfg, tag + "_plot.csv"), e,
                             res.summary);
  std::cout << "{\"command\":\"mc\",\"kind\":\"" << tag
            << "\",\"fingerprint\":\"" << montecarlo::experiment_fingerprint(e)
            << "\",\"cells\":" << res.summary.cells.size()
            << ",\"records\":" << res.records.size() << "}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netident: network interaction estimation and testing"};
  app.require_subcommand(1);

  std::string config_file, data_file, matrix_file, out_file;
  std::string method = "closed", stat = "fro", critical = "mc", kind;
  double lambda = 0.0, delta = 0.3, alpha = 0.05;
  std::size_t T = 0, reps = 500, df = 0, jobs = 0;
  std::uint64_t seed = 0;

  CLI::App* sim = app.add_subcommand("simulate", "Simulate a path");
  sim->add_option("--config", config_file, "INI config file")->required();
  sim->add_option("--seed", seed, "Seed override");
  sim->add_option("-T,--length", T, "Path length override");
  sim->add_option("--out", out_file, "Output CSV path");

  CLI::App* est = app.add_subcommand("estimate", "Estimate the matrix");
  est->add_option("--data", data_file, "Path CSV")->required();
  est->add_option("--config", config_file, "INI config file");
  est->add_option("--method", method, "closed|gmm|lasso");
  est->add_option("--lambda", lambda, "Lasso penalty");
  est->add_option("--delta", delta, "Decay rate");
  est->add_option("--out", out_file, "Output CSV path");

  CLI::App* tst = app.add_subcommand("test", "Test for network dependence");
  tst->add_option("--data", data_file, "Path CSV")->required();
  tst->add_option("--alpha", alpha, "Test level");
  tst->add_option("--stat", stat, "fro|spec");
  tst->add_option("--critical", critical, "chi2|mc");
  tst->add_option("--reps", reps, "Null replications");
  tst->add_option("--df", df, "Chi-square degrees of freedom (0 = n^2)");
  tst->add_option("--delta", delta, "Decay rate");
  tst->add_option("--seed", seed, "Null-simulation seed");

  CLI::App* spc = app.add_subcommand("spectra", "Spectral diagnostics");
  spc->add_option("--config", config_file, "INI config file");
  spc->add_option("--matrix", matrix_file, "Matrix CSV");

  CLI::App* mc = app.add_subcommand("mc", "Run a Monte Carlo experiment");
  mc->add_option("--config", config_file, "INI config file")->required();
  mc->add_option("--kind", kind, "size|power|local|degenerate|spectral|accuracy");
  mc->add_option("--jobs", jobs, "Worker threads (0 = all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_file, seed, T, out_file);
    if (est->parsed())
      return cmd_estimate(data_file, config_file, method, lambda, delta,
                          out_file);
    if (tst->parsed())
      return cmd_test(data_file, alpha, stat, critical, reps, df, delta,
                      seed);
    if (spc->parsed()) return cmd_spectra(config_file, matrix_file);
    if (mc->parsed()) return cmd_mc(config_file, kind, jobs);
  } catch (const SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
