#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netident/dynamics.hpp"
#include "netident/matrix.hpp"
#include "netident/montecarlo.hpp"
#include "netident/networks.hpp"

namespace netident::io {

struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct IniDocument {
  std::vector<IniSection> sections;

  const IniSection* find(const std::string& name) const;
};

// Sectioned key-value text: `[section]` headers, `key = value` lines,
// `#`/`;` comments, blank lines ignored. Duplicate keys within a section
// are rejected.
IniDocument parse_ini(std::istream& in, const std::string& origin = "<ini>");
IniDocument parse_ini_file(const std::string& file);

// Matrix interchange format: header line `# n=<n>`, then n rows of n
// comma-separated decimals (17 significant digits on write).
void write_matrix_csv(const DenseMatrix& m, const std::string& file);
DenseMatrix read_matrix_csv(const std::string& file);

struct CliConfig {
  networks::NetworkSpec network;
  bool has_network = false;
  dynamics::DynamicsConfig dyn;
  std::size_t T = 200;
  std::optional<std::string> a_file;  // matrix CSV overriding the network
  montecarlo::ExperimentConfig experiment;
  std::string output_dir = ".";
  std::string format = "csv";  // csv | jsonl
};

// Typed loader over the INI document. Unknown sections or keys are
// rejected with the offending name; numeric ranges are validated here.
CliConfig load_cli_config(const std::string& file);

}  // namespace netident::io
