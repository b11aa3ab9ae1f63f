#pragma once

#include <optional>
#include <string>
#include <vector>

#include "params.hpp"

namespace gabic {

// Flat key-per-line configuration with dotted section prefixes. Energies are
// multiples of the hopping strength, times multiples of its inverse.
struct DynamicsConfig {
  double dt = 0.05;
  double t_max = 400.0;
  std::vector<int> tracked_sites = {0, 1, 2, 3};  // relative to leg0
};

struct AnalysisConfig {
  double rel_threshold = 0.05;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;
  std::string subcommand = "spectrum";
};

struct OutputConfig {
  std::string directory = "out";
  std::string format = "csv";  // csv | json
};

struct RunConfig {
  SystemParams system;
  int total_sites = 2001;
  std::optional<int> leg0_index;  // absent: legs centered
  DynamicsConfig dynamics;
  AnalysisConfig analysis;
  std::optional<SweepConfig> sweep;
  OutputConfig output;

  Lattice lattice() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Assigns one dotted key; throws ConfigError on unknown keys or bad values.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Every violated invariant with its module of origin; empty means runnable.
// The subcommand adds per-command requirements (bic: atom in band, boc: g > 0).
std::vector<Violation> validate(const RunConfig& cfg, const std::string& subcommand = "");

std::string config_snapshot_json(const RunConfig& cfg);

}  // namespace gabic
