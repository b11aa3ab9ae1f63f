#include "config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace gabic {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + value + "'");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

const std::set<std::string> kSweepable = {
    "system.omega_atom", "system.omega_cavity", "system.hopping",
    "system.coupling",   "system.phase",
};

}  // namespace

Lattice RunConfig::lattice() const {
  if (leg0_index) {
    Lattice lat;
    lat.total_sites = total_sites;
    lat.leg0_index = *leg0_index;
    return lat;
  }
  return centered_lattice(total_sites, system);
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "system.omega_atom") cfg.system.omega_atom = parse_double(key, value);
  else if (key == "system.omega_cavity") cfg.system.omega_cavity = parse_double(key, value);
  else if (key == "system.hopping") cfg.system.hopping = parse_double(key, value);
  else if (key == "system.coupling") cfg.system.coupling = parse_double(key, value);
  else if (key == "system.leg_separation") cfg.system.leg_separation = parse_int(key, value);
  else if (key == "system.phase") cfg.system.phase = parse_double(key, value);
  else if (key == "lattice.total_sites") cfg.total_sites = parse_int(key, value);
  else if (key == "lattice.leg0_index") {
    if (value == "auto") cfg.leg0_index.reset();
    else cfg.leg0_index = parse_int(key, value);
  } else if (key == "dynamics.dt") cfg.dynamics.dt = parse_double(key, value);
  else if (key == "dynamics.t_max") cfg.dynamics.t_max = parse_double(key, value);
  else if (key == "dynamics.tracked_sites") {
    cfg.dynamics.tracked_sites.clear();
    for (const auto& item : split_list(value))
      cfg.dynamics.tracked_sites.push_back(parse_int(key, item));
  } else if (key == "analysis.rel_threshold") cfg.analysis.rel_threshold = parse_double(key, value);
  else if (key == "sweep.parameter") {
    if (!cfg.sweep) cfg.sweep.emplace();
    cfg.sweep->parameter = value;
  } else if (key == "sweep.values") {
    if (!cfg.sweep) cfg.sweep.emplace();
    cfg.sweep->values.clear();
    for (const auto& item : split_list(value))
      cfg.sweep->values.push_back(parse_double(key, item));
  } else if (key == "sweep.subcommand") {
    if (!cfg.sweep) cfg.sweep.emplace();
    cfg.sweep->subcommand = value;
  } else if (key == "output.directory") cfg.output.directory = value;
  else if (key == "output.format") cfg.output.format = value;
  else throw ConfigError("unknown configuration key: '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "line " << lineno << ": expected 'key = value'";
      throw ConfigError(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    set_key(cfg, key, value);
    seen.insert(key);
  }
  for (const char* required :
       {"system.omega_atom", "system.coupling", "system.leg_separation", "system.phase"}) {
    if (!seen.count(required))
      throw ConfigError(std::string("missing required key: '") + required + "'");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::vector<Violation> validate(const RunConfig& cfg, const std::string& subcommand) {
  const Lattice lat = cfg.lattice();
  std::vector<Violation> v = validate(cfg.system, lat);

  const int legN = lat.legN_index(cfg.system);
  const int margin = std::min(lat.leg0_index, lat.total_sites - 1 - legN);
  if (margin < lat.total_sites / 4)
    v.push_back({"core-model", "lattice",
                 "legs are not centered: boundary margin " + std::to_string(margin) +
                     " < total_sites/4"});

  if (!(cfg.dynamics.dt > 0.0))
    v.push_back({"dynamics", "dynamics.dt", "sample spacing must be > 0"});
  if (!(cfg.dynamics.t_max > cfg.dynamics.dt))
    v.push_back({"dynamics", "dynamics.t_max", "t_max must exceed dt"});
  for (int s : cfg.dynamics.tracked_sites) {
    const int abs_site = lat.leg0_index + s;
    if (abs_site < 0 || abs_site >= lat.total_sites)
      v.push_back({"dynamics", "dynamics.tracked_sites",
                   "site " + std::to_string(s) + " falls outside the chain"});
  }

  if (!(cfg.analysis.rel_threshold > 0.0 && cfg.analysis.rel_threshold < 1.0))
    v.push_back({"beat-analysis", "analysis.rel_threshold", "must lie in (0, 1)"});

  if (cfg.output.format != "csv" && cfg.output.format != "json")
    v.push_back({"cli-io", "output.format", "must be 'csv' or 'json'"});

  if (cfg.sweep) {
    if (!kSweepable.count(cfg.sweep->parameter))
      v.push_back({"cli-io", "sweep.parameter",
                   "not a sweepable parameter: '" + cfg.sweep->parameter + "'"});
    if (cfg.sweep->values.empty())
      v.push_back({"cli-io", "sweep.values", "sweep needs at least one value"});
    if (cfg.sweep->subcommand == "sweep" || cfg.sweep->subcommand == "selfcheck")
      v.push_back({"cli-io", "sweep.subcommand",
                   "cannot sweep over '" + cfg.sweep->subcommand + "'"});
  } else if (subcommand == "sweep") {
    v.push_back({"cli-io", "sweep", "sweep subcommand requires a [sweep] section"});
  }

  const double band_gap =
      std::abs(cfg.system.omega_atom - cfg.system.omega_cavity) - 2.0 * cfg.system.hopping;
  if (subcommand == "bic" && band_gap >= 0.0)
    v.push_back({"spectrum", "system.omega_atom",
                 "atom frequency lies outside the band; no BIC regime"});
  if (subcommand == "boc" && !(cfg.system.coupling > 0.0))
    v.push_back({"spectrum", "system.coupling", "boc requires coupling > 0"});
  return v;
}

std::string config_snapshot_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["system"] = {
      {"omega_atom", cfg.system.omega_atom},
      {"omega_cavity", cfg.system.omega_cavity},
      {"hopping", cfg.system.hopping},
      {"coupling", cfg.system.coupling},
      {"leg_separation", cfg.system.leg_separation},
      {"phase", cfg.system.phase},
  };
  const Lattice lat = cfg.lattice();
  j["lattice"] = {{"total_sites", lat.total_sites},
                  {"leg0_index", lat.leg0_index},
                  {"boundary", "hard-wall"}};
  j["dynamics"] = {{"dt", cfg.dynamics.dt},
                   {"t_max", cfg.dynamics.t_max},
                   {"tracked_sites", cfg.dynamics.tracked_sites}};
  j["analysis"] = {{"rel_threshold", cfg.analysis.rel_threshold}};
  if (cfg.sweep)
    j["sweep"] = {{"parameter", cfg.sweep->parameter},
                  {"values", cfg.sweep->values},
                  {"subcommand", cfg.sweep->subcommand}};
  j["output"] = {{"directory", cfg.output.directory}, {"format", cfg.output.format}};
  return j.dump(2);
}

}  // namespace gabic
