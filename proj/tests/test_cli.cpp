#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
#ifdef NETIDENT_CLI_PATH
  return NETIDENT_CLI_PATH;
#else
  const char* env = std::getenv("NETIDENT_CLI_BIN");
  REQUIRE(env != nullptr);
  return env;
#endif
}

int run(const std::string& args, const std::string& stdout_file = "cli_out.txt") {
  const std::string cmd =
      cli_path() + " " + args + " > " + stdout_file + " 2> cli_err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  out << text;
}

const char* kSimConfig =
    "[network]\n"
    "family = chain\n"
    "n = 6\n"
    "seed = 11\n"
    "target_radius = 0.45\n"
    "[dynamics]\n"
    "delta = 0.5\n"
    "T = 150\n"
    "seed = 21\n";

}  // namespace

TEST_CASE("simulate is deterministic and respects overrides") {
  write_file("sim.ini", kSimConfig);
  CHECK(run("simulate --config sim.ini --out p1.csv") == 0);
  CHECK(run("simulate --config sim.ini --out p2.csv") == 0);
  CHECK(slurp("p1.csv") == slurp("p2.csv"));
  CHECK(slurp("p1.csv").size() > 0);
  // different seed changes the path
  CHECK(run("simulate --config sim.ini --seed 99 --out p3.csv") == 0);
  CHECK(slurp("p1.csv") != slurp("p3.csv"));
  // shorter override
  CHECK(run("simulate --config sim.ini -T 10 --out p4.csv") == 0);
  std::size_t lines = 0;
  for (char ch : slurp("p4.csv"))
    if (ch == '\n') ++lines;
  CHECK(lines == 12);  // comment + header + 10 rows
  std::remove("p3.csv");
  std::remove("p4.csv");
}

TEST_CASE("simulate: noise-free null path is identically zero") {
  write_file("zero.ini",
             "[dynamics]\n"
             "n = 3\n"
             "delta = 0.5\n"
             "sigma = 0\n"
             "T = 20\n");
  CHECK(run("simulate --config zero.ini --out z.csv") == 0);
  const std::string text = slurp("z.csv");
  CHECK(text.find("t,z1,z2,z3") != std::string::npos);
  // every state entry is exactly zero
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    const std::size_t comma = line.find(',');
    CHECK(line.substr(comma + 1) == "0,0,0");
  }
  std::remove("z.csv");
}

TEST_CASE("simulate: explosive config exits 3") {
  write_file("boom.ini",
             "[network]\n"
             "family = chain\n"
             "n = 4\n"
             "weight_scale = 3\n"
             "[dynamics]\n"
             "delta = 0\n"
             "T = 100\n");
  CHECK(run("simulate --config boom.ini --out boom.csv") == 3);
}

TEST_CASE("config and file errors exit 2") {
  CHECK(run("simulate --config missing.ini") == 2);
  CHECK(run("estimate --data missing.csv") == 2);
  write_file("malformed.csv", "not a path file\n1,2,3\n");
  CHECK(run("estimate --data malformed.csv") == 2);
  std::remove("malformed.csv");
  // unknown flag
  CHECK(run("simulate --config sim.ini --frobnicate") == 2);
  // no subcommand
  CHECK(run("") == 2);
}

TEST_CASE("estimate: lasso at lambda 0 agrees with closed form") {
  write_file("sim.ini", kSimConfig);
  REQUIRE(run("simulate --config sim.ini -T 400 --out est_path.csv") == 0);
  CHECK(run("estimate --data est_path.csv --method closed --delta 0.5 "
            "--out a_closed.csv") == 0);
  const std::string meta = slurp("cli_out.txt");
  CHECK(meta.find("\"method\":\"closed\"") != std::string::npos);
  CHECK(run("estimate --data est_path.csv --method lasso --lambda 0 "
            "--delta 0.5 --out a_lasso.csv") == 0);
  // parse both matrices and compare entrywise
  std::ifstream c("a_closed.csv"), l("a_lasso.csv");
  std::string lc, ll;
  std::getline(c, lc);
  std::getline(l, ll);  // headers
  double worst = 0.0;
  while (std::getline(c, lc) && std::getline(l, ll)) {
    std::istringstream sc(lc), sl(ll);
    std::string tc, tl;
    while (std::getline(sc, tc, ',') && std::getline(sl, tl, ','))
      worst = std::max(worst, std::fabs(std::stod(tc) - std::stod(tl)));
  }
  CHECK(worst <= 1e-5);
  CHECK(run("estimate --data est_path.csv --method gmm --delta 0.5 "
            "--out a_gmm.csv") == 0);
  std::remove("a_closed.csv");
  std::remove("a_lasso.csv");
  std::remove("a_gmm.csv");
  std::remove("estimate.jsonl");
}

TEST_CASE("test command reports a decision") {
  write_file("sim.ini", kSimConfig);
  REQUIRE(run("simulate --config sim.ini -T 300 --out t_path.csv") == 0);
  CHECK(run("test --data t_path.csv --delta 0.5 --alpha 0.05 --reps 200 "
            "--seed 7") == 0);
  const std::string out = slurp("cli_out.txt");
  CHECK(out.find("\"stat_fro\":") != std::string::npos);
  CHECK(out.find("\"alpha\":0.05") != std::string::npos);
  CHECK(out.find("\"source\":\"mc\"") != std::string::npos);
  // chi2 route
  CHECK(run("test --data t_path.csv --delta 0.5 --critical chi2") == 0);
  CHECK(slurp("cli_out.txt").find("\"source\":\"chi2\"") != std::string::npos);
  // same seed, same output
  CHECK(run("test --data t_path.csv --delta 0.5 --reps 200 --seed 7",
            "cli_a.txt") == 0);
  CHECK(run("test --data t_path.csv --delta 0.5 --reps 200 --seed 7",
            "cli_b.txt") == 0);
  CHECK(slurp("cli_a.txt") == slurp("cli_b.txt"));
  std::remove("t_path.csv");
  std::remove("cli_a.txt");
  std::remove("cli_b.txt");
}

TEST_CASE("spectra on an explicit matrix") {
  write_file("diag.csv", "# n=2\n0.3,0\n0,0.3\n");
  CHECK(run("spectra --matrix diag.csv") == 0);
  const std::string out = slurp("cli_out.txt");
  CHECK(out.find("\"dispersion\":0") != std::string::npos);
  CHECK(out.find("\"radius\":0.3") != std::string::npos);
  std::remove("diag.csv");
  CHECK(run("spectra") == 2);  // neither --config nor --matrix
}

TEST_CASE("mc: parallel and serial runs write identical records") {
  write_file("mc.ini",
             "[network]\n"
             "family = chain\n"
             "seed = 5\n"
             "[experiment]\n"
             "kind = accuracy\n"
             "grid = 6x80\n"
             "rho = 0.45\n"
             "delta = 0.5\n"
             "reps = 6\n"
             "master_seed = 42\n");
  CHECK(run("mc --config mc.ini --jobs 1") == 0);
  const std::string serial = slurp("accuracy_records.csv");
  CHECK(run("mc --config mc.ini --jobs 4") == 0);
  CHECK(slurp("accuracy_records.csv") == serial);
  CHECK(serial.find("kind,n,T,rep,seed") != std::string::npos);
  CHECK(slurp("accuracy_summary.csv").find("rejection_rate") !=
        std::string::npos);
  std::remove("accuracy_records.csv");
  std::remove("accuracy_summary.csv");
  std::remove("accuracy_plot.csv");
  std::remove("mc.ini");
}

TEST_CASE("NETIDENT_SEED provides the seed when none is given") {
  write_file("envseed.ini",
             "[dynamics]\n"
             "n = 3\n"
             "delta = 0.5\n"
             "T = 30\n");
  const std::string base = cli_path();
  auto run_env = [&](const std::string& env_prefix, const std::string& out) {
    const std::string cmd = env_prefix + " " + base +
                            " simulate --config envseed.ini --out " + out +
                            " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  CHECK(run_env("NETIDENT_SEED=123", "e1.csv") == 0);
  CHECK(run_env("NETIDENT_SEED=123", "e2.csv") == 0);
  CHECK(run_env("NETIDENT_SEED=456", "e3.csv") == 0);
  CHECK(slurp("e1.csv") == slurp("e2.csv"));
  CHECK(slurp("e1.csv") != slurp("e3.csv"));
  // explicit --seed beats the environment
  CHECK(run_env("NETIDENT_SEED=123", "e4.csv --seed 456") == 0);
  CHECK(slurp("e4.csv") == slurp("e3.csv"));
  std::remove("envseed.ini");
  std::remove("e1.csv");
  std::remove("e2.csv");
  std::remove("e3.csv");
  std::remove("e4.csv");
}
