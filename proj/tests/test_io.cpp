#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "netident/io.hpp"

using namespace netident;
using namespace netident::io;

namespace {

void write_file(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
}

std::string thrown_message(const std::string& ini_text) {
  std::istringstream in(ini_text);
  try {
    parse_ini(in, "cfg.ini");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_ini: sections, comments, whitespace") {
  std::istringstream in(
      "# leading comment\n"
      "[network]\n"
      "family = chain   \n"
      "n=12\n"
      "; alt comment\n"
      "\n"
      "[dynamics]\n"
      "delta = 0.5\n");
  const IniDocument doc = parse_ini(in);
  REQUIRE(doc.sections.size() == 2);
  const IniSection* net = doc.find("network");
  REQUIRE(net != nullptr);
  CHECK(net->entries.size() == 2);
  CHECK(net->entries[0].first == "family");
  CHECK(net->entries[0].second == "chain");
  CHECK(net->entries[1].second == "12");
  CHECK(doc.find("dynamics") != nullptr);
  CHECK(doc.find("output") == nullptr);
}

TEST_CASE("parse_ini: errors carry origin and line") {
  CHECK(thrown_message("[a]\nx = 1\nx = 2\n").find("cfg.ini:3") !=
        std::string::npos);
  CHECK(thrown_message("key_without_section = 1\n").find("cfg.ini:1") !=
        std::string::npos);
  CHECK(thrown_message("[a]\nnot-a-pair\n").find("cfg.ini:2") !=
        std::string::npos);
  CHECK(thrown_message("[unclosed\n").find("cfg.ini:1") != std::string::npos);
}

TEST_CASE("matrix CSV round trip") {
  DenseMatrix m{{1.0, -2.5}, {1.0 / 3.0, 4e-17}};
  const std::string file = "mat_roundtrip.csv";
  write_matrix_csv(m, file);
  const DenseMatrix back = read_matrix_csv(file);
  REQUIRE(back.rows() == 2);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(back.data()[k] == m.data()[k]);  // 17 digits: exact round trip
  std::remove(file.c_str());
}

TEST_CASE("matrix CSV rejects malformed input") {
  const std::string file = "mat_bad.csv";
  write_file(file, "no header\n1,2\n3,4\n");
  CHECK_THROWS_AS(read_matrix_csv(file), Error);
  write_file(file, "# n=2\n1,2\n");
  CHECK_THROWS_AS(read_matrix_csv(file), Error);  // missing row
  write_file(file, "# n=2\n1,2,3\n4,5\n");
  CHECK_THROWS_AS(read_matrix_csv(file), Error);  // wrong entry count
  write_file(file, "# n=2\n1,x\n3,4\n");
  CHECK_THROWS_AS(read_matrix_csv(file), Error);  // non-numeric
  write_file(file, "# n=2\n1,2\n3,4\n5,6\n");
  CHECK_THROWS_AS(read_matrix_csv(file), Error);  // trailing content
  std::remove(file.c_str());
  CHECK_THROWS_AS(read_matrix_csv("does_not_exist.csv"), Error);
}

TEST_CASE("load_cli_config: full configuration") {
  const std::string file = "full.ini";
  write_file(file,
             "[network]\n"
             "family = chain\n"
             "n = 12\n"
             "seed = 9\n"
             "target_radius = 0.5\n"
             "[dynamics]\n"
             "delta = 0.4\n"
             "sigma = 1.5\n"
             "T = 300\n"
             "link = tanh\n"
             "theta = 0.8\n"
             "shock = sinusoid\n"
             "shock_amplitude = 0.2\n"
             "shock_period = 12\n"
             "[experiment]\n"
             "kind = power\n"
             "grid = 25x50, 25x200\n"
             "rho = 0.45\n"
             "reps = 100\n"
             "alpha = 0.05\n"
             "stat = spec\n"
             "critical = mc\n"
             "critical_reps = 200\n"
             "master_seed = 4\n"
             "[output]\n"
             "dir = out\n"
             "format = jsonl\n");
  const CliConfig cfg = load_cli_config(file);
  std::remove(file.c_str());
  CHECK(cfg.has_network);
  CHECK(cfg.network.family == networks::Family::Chain);
  CHECK(cfg.network.n == 12);
  CHECK(cfg.network.seed == 9);
  REQUIRE(cfg.network.target_radius.has_value());
  CHECK(*cfg.network.target_radius == 0.5);
  CHECK(cfg.dyn.delta == 0.4);
  CHECK(cfg.dyn.sigma == 1.5);
  CHECK(cfg.T == 300);
  CHECK(cfg.dyn.link.kind == dynamics::LinkKind::Tanh);
  REQUIRE(cfg.dyn.link.theta.size() == 1);
  CHECK(cfg.dyn.link.theta[0] == 0.8);
  CHECK(cfg.dyn.aggregate_shock.kind == dynamics::ShockKind::Sinusoid);
  CHECK(cfg.dyn.aggregate_shock.period == 12.0);
  CHECK(cfg.experiment.kind == montecarlo::ExperimentKind::Power);
  REQUIRE(cfg.experiment.grid.size() == 2);
  CHECK(cfg.experiment.grid[0].first == 25);
  CHECK(cfg.experiment.grid[1].second == 200);
  CHECK(cfg.experiment.stat == inference::StatKind::Spectral);
  CHECK(cfg.experiment.critical.reps == 200);
  CHECK(cfg.experiment.master_seed == 4);
  CHECK(cfg.experiment.network.family == networks::Family::Chain);
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.format == "jsonl");
}

TEST_CASE("load_cli_config: unknown keys and sections are named") {
  const std::string file = "bad.ini";
  write_file(file, "[network]\nfamili = chain\n");
  try {
    load_cli_config(file);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("famili") != std::string::npos);
  }
  write_file(file, "[metwork]\nfamily = chain\n");
  try {
    load_cli_config(file);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("metwork") != std::string::npos);
  }
  std::remove(file.c_str());
}

TEST_CASE("load_cli_config: range validation") {
  const std::string file = "range.ini";
  write_file(file, "[dynamics]\ndelta = 1.5\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[dynamics]\nsigma = -1\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[network]\ndensity = 2\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[experiment]\ngrid = 25x2\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);  // T too short
  write_file(file, "[experiment]\ngrid = 25-200\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);  // malformed cell
  write_file(file, "[experiment]\nalpha = 0\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[experiment]\ncritical = jackknife\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[output]\nformat = xml\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  write_file(file, "[dynamics]\ndelta = abc\n");
  CHECK_THROWS_AS(load_cli_config(file), Error);
  std::remove(file.c_str());
}

TEST_CASE("load_cli_config: defaults when sections are absent") {
  const std::string file = "minimal.ini";
  write_file(file, "[dynamics]\nn = 4\n");
  const CliConfig cfg = load_cli_config(file);
  std::remove(file.c_str());
  CHECK_FALSE(cfg.has_network);
  CHECK(cfg.dyn.n == 4);
  CHECK(cfg.T == 200);
  CHECK(cfg.output_dir == ".");
  CHECK(cfg.format == "csv");
}
