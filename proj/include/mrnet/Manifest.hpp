#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace mrnet {

// FNV-1a 64-bit over the file's bytes, rendered "fnv1a64:<16 hex digits>".
std::uint64_t fnv1a64(const std::string& bytes);
std::string fileDigest(const std::string& path);

// Reproducibility record accompanying every output directory: tool,
// version, subcommand, full config, input paths with digests, output names.
// Deliberately carries no timestamps so reruns are byte-identical.
nlohmann::json buildManifest(const std::string& subcommand, const nlohmann::json& config,
                             const std::map<std::string, std::string>& inputs,
                             const std::vector<std::string>& outputs);

// Serializes `manifest` to <dir>/run_manifest.json atomically.
void writeManifest(const std::string& dir, const nlohmann::json& manifest);

}  // namespace mrnet
