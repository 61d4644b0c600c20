#include "mrnet/RunConfig.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>

#include "mrnet/Errors.hpp"

namespace mrnet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parseReal(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  return v;
}

long long parseInt(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
  return v;
}

std::uint64_t parseSeed(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || value[0] == '-')
    throw ConfigError("config key '" + key + "': not an unsigned integer: '" + value + "'");
  return v;
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false: '" + value + "'");
}

}  // namespace

void applyConfigEntry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "alpha") {
    config.alpha = parseReal(key, value);
    if (config.alpha <= 0.0 || config.alpha >= 1.0)
      throw ConfigError("config key 'alpha': must lie in (0,1)");
  } else if (key == "f_threshold") {
    config.fThreshold = parseReal(key, value);
    if (config.fThreshold < 0.0) throw ConfigError("config key 'f_threshold': must be >= 0");
  } else if (key == "max_per_component") {
    config.maxPerComponent = static_cast<int>(parseInt(key, value));
    if (config.maxPerComponent < 1)
      throw ConfigError("config key 'max_per_component': must be >= 1");
  } else if (key == "max_cond_size") {
    config.maxCondSize = static_cast<int>(parseInt(key, value));
    if (config.maxCondSize < 0) throw ConfigError("config key 'max_cond_size': must be >= 0");
  } else if (key == "max_ivs") {
    config.maxIvs = static_cast<int>(parseInt(key, value));
    if (config.maxIvs < 1) throw ConfigError("config key 'max_ivs': must be >= 1");
  } else if (key == "min_explained_variance") {
    config.minExplainedVariance = parseReal(key, value);
    if (config.minExplainedVariance < 0.0 || config.minExplainedVariance > 1.0)
      throw ConfigError("config key 'min_explained_variance': must lie in [0,1]");
  } else if (key == "min_votes") {
    config.minVotes = static_cast<int>(parseInt(key, value));
    if (config.minVotes < 1) throw ConfigError("config key 'min_votes': must be >= 1");
  } else if (key == "hub_min_degree") {
    config.hubMinDegree = static_cast<int>(parseInt(key, value));
    if (config.hubMinDegree < 1) throw ConfigError("config key 'hub_min_degree': must be >= 1");
  } else if (key == "hub_percentile") {
    config.hubPercentile = parseReal(key, value);
    if (config.hubPercentile <= 0.0 || config.hubPercentile > 1.0)
      throw ConfigError("config key 'hub_percentile': must lie in (0,1]");
  } else if (key == "bonferroni_per_edge") {
    config.bonferroniPerEdge = parseBool(key, value);
  } else if (key == "seed") {
    config.seed = parseSeed(key, value);
  } else if (key == "threads") {
    config.threads = static_cast<int>(parseInt(key, value));
    if (config.threads < 1) throw ConfigError("config key 'threads': must be >= 1");
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("config key 'out': must not be empty");
    config.out = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

RunConfig parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::set<std::string> seen;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineNo) + ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineNo) + ": empty key");
    if (!seen.insert(key).second)
      throw ConfigError("config line " + std::to_string(lineNo) + ": duplicate key '" + key + "'");
    applyConfigEntry(config, key, value);
  }
  return config;
}

nlohmann::json runConfigToJson(const RunConfig& config) {
  return nlohmann::json{{"alpha", config.alpha},
                        {"f_threshold", config.fThreshold},
                        {"max_per_component", config.maxPerComponent},
                        {"max_cond_size", config.maxCondSize},
                        {"max_ivs", config.maxIvs},
                        {"min_explained_variance", config.minExplainedVariance},
                        {"min_votes", config.minVotes},
                        {"hub_min_degree", config.hubMinDegree},
                        {"hub_percentile", config.hubPercentile},
                        {"bonferroni_per_edge", config.bonferroniPerEdge},
                        {"seed", config.seed},
                        {"threads", config.threads},
                        {"out", config.out}};
}

}  // namespace mrnet
