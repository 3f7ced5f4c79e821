#include "netident/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netident/inference.hpp"

namespace netident::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SpecError(where + ": " + what);
}

double to_double(const std::string& where, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail(where, "not a number: '" + v + "'");
  }
  if (pos != v.size()) fail(where, "trailing characters in number: '" + v + "'");
  if (!std::isfinite(x)) fail(where, "non-finite value");
  return x;
}

std::uint64_t to_u64(const std::string& where, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    fail(where, "not a non-negative integer: '" + v + "'");
  }
  if (pos != v.size()) fail(where, "trailing characters in integer: '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& where, const std::string& v) {
  return static_cast<std::size_t>(to_u64(where, v));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(trim(part));
  return out;
}

}  // namespace

const IniSection* IniDocument::find(const std::string& name) const {
  for (const IniSection& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

IniDocument parse_ini(std::istream& in, const std::string& origin) {
  IniDocument doc;
  IniSection* current = nullptr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(where, "unterminated section header");
      const std::string name = trim(t.substr(1, t.size() - 2));
      if (name.empty()) fail(where, "empty section name");
      doc.sections.push_back({name, {}});
      current = &doc.sections.back();
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) fail(where, "expected key = value");
    if (!current) fail(where, "key outside any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    for (const auto& [k, v] : current->entries)
      if (k == key)
        fail(where, "duplicate key '" + key + "' in [" + current->name + "]");
    current->entries.emplace_back(key, value);
  }
  return doc;
}

IniDocument parse_ini_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("cannot open config file: " + file);
  return parse_ini(in, file);
}

void write_matrix_csv(const DenseMatrix& m, const std::string& file) {
  require_square(m, "write_matrix_csv");
  std::ofstream out(file);
  if (!out) throw Error("cannot open output file: " + file);
  out << "# n=" << m.rows() << "\n";
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

DenseMatrix read_matrix_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw SpecError("cannot open matrix file: " + file);
  std::string line;
  if (!std::getline(in, line)) throw SpecError(file + ": empty file");
  const std::string header = trim(line);
  if (header.rfind("# n=", 0) != 0)
    throw SpecError(file + ": expected '# n=<n>' header");
  const std::size_t n = to_count(file, trim(header.substr(4)));
  if (n == 0) throw SpecError(file + ": n must be positive");
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw SpecError(file + ": expected " + std::to_string(n) + " rows");
    const std::vector<std::string> parts = split(trim(line), ',');
    if (parts.size() != n)
      throw SpecError(file + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(parts.size()) + " entries, expected " +
                      std::to_string(n));
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = to_double(file + " row " + std::to_string(i + 1), parts[j]);
  }
  while (std::getline(in, line))
    if (!trim(line).empty())
      throw SpecError(file + ": trailing content after matrix rows");
  return m;
}

namespace {

void load_network(const IniSection& sec, CliConfig& cfg) {
  cfg.has_network = true;
  for (const auto& [key, value] : sec.entries) {
    const std::string where = "[network]." + key;
    if (key == "family") {
      cfg.network.family = networks::family_from_name(value);
    } else if (key == "n") {
      cfg.network.n = to_count(where, value);
      if (cfg.network.n < 1) fail(where, "n must be >= 1");
    } else if (key == "density") {
      cfg.network.density = to_double(where, value);
      if (cfg.network.density < 0.0 || cfg.network.density > 1.0)
        fail(where, "density must lie in [0, 1]");
    } else if (key == "blocks") {
      cfg.network.blocks = to_count(where, value);
    } else if (key == "weight_scale") {
      cfg.network.weight_scale = to_double(where, value);
      if (cfg.network.weight_scale < 0.0)
        fail(where, "weight_scale must be >= 0");
    } else if (key == "target_radius") {
      const double r = to_double(where, value);
      if (r <= 0.0) fail(where, "target_radius must be > 0");
      cfg.network.target_radius = r;
    } else if (key == "seed") {
      cfg.network.seed = to_u64(where, value);
    } else {
      fail("[network]", "unknown key '" + key + "'");
    }
  }
}

void load_dynamics(const IniSection& sec, CliConfig& cfg) {
  for (const auto& [key, value] : sec.entries) {
    const std::string where = "[dynamics]." + key;
    if (key == "n") {
      cfg.dyn.n = to_count(where, value);
      if (cfg.dyn.n < 1) fail(where, "n must be >= 1");
    } else if (key == "delta") {
      cfg.dyn.delta = to_double(where, value);
      if (cfg.dyn.delta < 0.0 || cfg.dyn.delta > 1.0)
        fail(where, "delta must lie in [0, 1]");
    } else if (key == "sigma") {
      cfg.dyn.sigma = to_double(where, value);
      if (cfg.dyn.sigma < 0.0) fail(where, "sigma must be >= 0");
    } else if (key == "T") {
      cfg.T = to_count(where, value);
      if (cfg.T < 1) fail(where, "T must be >= 1");
    } else if (key == "burn_in") {
      cfg.dyn.burn_in = to_count(where, value);
    } else if (key == "seed") {
      cfg.dyn.seed = to_u64(where, value);
    } else if (key == "link") {
      cfg.dyn.link.kind = dynamics::link_from_name(value);
    } else if (key == "theta") {
      cfg.dyn.link.theta.clear();
      for (const std::string& part : split(value, ','))
        cfg.dyn.link.theta.push_back(to_double(where, part));
    } else if (key == "shock") {
      if (value == "none")
        cfg.dyn.aggregate_shock.kind = dynamics::ShockKind::None;
      else if (value == "constant")
        cfg.dyn.aggregate_shock.kind = dynamics::ShockKind::Constant;
      else if (value == "sinusoid")
        cfg.dyn.aggregate_shock.kind = dynamics::ShockKind::Sinusoid;
      else
        fail(where, "unknown shock kind '" + value + "'");
    } else if (key == "shock_level") {
      cfg.dyn.aggregate_shock.level = to_double(where, value);
    } else if (key == "shock_amplitude") {
      cfg.dyn.aggregate_shock.amplitude = to_double(where, value);
    } else if (key == "shock_period") {
      cfg.dyn.aggregate_shock.period = to_double(where, value);
      if (cfg.dyn.aggregate_shock.period <= 0.0)
        fail(where, "shock_period must be > 0");
    } else if (key == "a_file") {
      cfg.a_file = value;
    } else {
      fail("[dynamics]", "unknown key '" + key + "'");
    }
  }
}

void load_experiment(const IniSection& sec, CliConfig& cfg) {
  montecarlo::ExperimentConfig& e = cfg.experiment;
  for (const auto& [key, value] : sec.entries) {
    const std::string where = "[experiment]." + key;
    if (key == "kind") {
      e.kind = montecarlo::kind_from_name(value);
    } else if (key == "grid") {
      e.grid.clear();
      for (const std::string& cell : split(value, ',')) {
        const std::size_t x = cell.find('x');
        if (x == std::string::npos)
          fail(where, "grid cells must look like <n>x<T>: '" + cell + "'");
        const std::size_t n = to_count(where, trim(cell.substr(0, x)));
        const std::size_t T = to_count(where, trim(cell.substr(x + 1)));
        if (n < 1 || T < 4) fail(where, "grid cells need n >= 1 and T >= 4");
        e.grid.emplace_back(n, T);
      }
    } else if (key == "rho") {
      e.rho = to_double(where, value);
    } else if (key == "c") {
      e.c = to_double(where, value);
      if (e.c < 0.0) fail(where, "c must be >= 0");
    } else if (key == "delta") {
      e.delta = to_double(where, value);
      if (e.delta < 0.0 || e.delta > 1.0)
        fail(where, "delta must lie in [0, 1]");
    } else if (key == "sigma") {
      e.sigma = to_double(where, value);
      if (e.sigma < 0.0) fail(where, "sigma must be >= 0");
    } else if (key == "reps") {
      e.reps = to_count(where, value);
      if (e.reps < 1) fail(where, "reps must be >= 1");
    } else if (key == "alpha") {
      e.alpha = to_double(where, value);
      if (e.alpha <= 0.0 || e.alpha >= 1.0)
        fail(where, "alpha must lie in (0, 1)");
    } else if (key == "stat") {
      e.stat = inference::stat_from_name(value);
    } else if (key == "critical") {
      if (value == "chi2")
        e.critical.source = inference::CriticalSource::ChiSquare;
      else if (value == "mc")
        e.critical.source = inference::CriticalSource::MonteCarlo;
      else
        fail(where, "critical must be chi2 or mc");
    } else if (key == "critical_reps") {
      e.critical.reps = to_count(where, value);
      if (e.critical.reps < 100) fail(where, "critical_reps must be >= 100");
    } else if (key == "df") {
      e.critical.df = to_count(where, value);
    } else if (key == "master_seed") {
      e.master_seed = to_u64(where, value);
    } else if (key == "jobs") {
      e.jobs = to_count(where, value);
    } else if (key == "link") {
      e.link.kind = dynamics::link_from_name(value);
    } else {
      fail("[experiment]", "unknown key '" + key + "'");
    }
  }
}

void load_output(const IniSection& sec, CliConfig& cfg) {
  for (const auto& [key, value] : sec.entries) {
    if (key == "dir") {
      cfg.output_dir = value;
    } else if (key == "format") {
      if (value != "csv" && value != "jsonl")
        fail("[output].format", "must be csv or jsonl");
      cfg.format = value;
    } else {
      fail("[output]", "unknown key '" + key + "'");
    }
  }
}

}  // namespace

CliConfig load_cli_config(const std::string& file) {
  const IniDocument doc = parse_ini_file(file);
  CliConfig cfg;
  for (const IniSection& sec : doc.sections) {
    if (sec.name == "network")
      load_network(sec, cfg);
    else if (sec.name == "dynamics")
      load_dynamics(sec, cfg);
    else if (sec.name == "experiment")
      load_experiment(sec, cfg);
    else if (sec.name == "output")
      load_output(sec, cfg);
    else
      throw SpecError(file + ": unknown section [" + sec.name + "]");
  }
  if (cfg.has_network) cfg.experiment.network = cfg.network;
  return cfg;
}

}  // namespace netident::io
