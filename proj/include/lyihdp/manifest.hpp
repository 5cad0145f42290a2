#pragma once

#include <string>
#include <vector>

#include "lyihdp/cascade.hpp"

namespace lyihdp {

inline constexpr const char* kVersion = "0.1.0";

// Run provenance written next to every CSV. The manifest is written with
// status "running" before any data file, then rewritten with the final
// status and wall-clock duration.
struct RunManifest {
  std::string status = "running"; // running | completed | diverged | error
  std::string detail;             // failure reason when not completed
  unsigned seed = 0;
  std::string config_snapshot;    // canonical key = value block
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  long out_of_fit_range_steps = 0;
};

void write_manifest(const RunManifest& m, const std::string& path);

} // namespace lyihdp
