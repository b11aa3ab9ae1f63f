#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>

#include "config.hpp"

namespace gabic {

struct RunOptions {
  std::string out_dir;     // overrides output.directory when non-empty
  std::string format;      // overrides output.format when non-empty
  int jobs = 1;            // parallel sweep points
  std::uint64_t seed = 12345;  // selfcheck random draws
};

// Executes one subcommand and returns the result manifest. Subcommands:
// spectrum, bic, boc, dynamics, beats, sweep, selfcheck. Artifacts are
// deterministic; the manifest also carries wall-clock timings.
nlohmann::json run(const RunConfig& cfg, const std::string& subcommand,
                   const RunOptions& opts);

}  // namespace gabic
