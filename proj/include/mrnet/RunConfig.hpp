#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace mrnet {

// Every tunable knob in one serializable bag. Config files are flat
// key=value lines ('#' comments); command-line flags override file values.
struct RunConfig {
  double alpha = 0.01;
  double fThreshold = 10.0;
  int maxPerComponent = 3;
  int maxCondSize = 3;
  int maxIvs = 20;
  double minExplainedVariance = 0.0;
  int minVotes = 1;
  int hubMinDegree = 3;
  double hubPercentile = 0.90;
  bool bonferroniPerEdge = false;
  std::uint64_t seed = 0;
  int threads = 1;      // accepted for forward compatibility; one worker used
  std::string out;      // output directory override
};

// Applies one key=value pair with range validation. Unknown keys and
// malformed values raise ConfigError naming the key.
void applyConfigEntry(RunConfig& config, const std::string& key, const std::string& value);

// Duplicate keys within one file are rejected.
RunConfig parseConfigFile(const std::string& path);

nlohmann::json runConfigToJson(const RunConfig& config);

}  // namespace mrnet
