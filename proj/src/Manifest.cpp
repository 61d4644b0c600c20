#include "mrnet/Manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mrnet/Csv.hpp"
#include "mrnet/Errors.hpp"
#include "mrnet/Version.hpp"

namespace mrnet {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string fileDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  char hex[32];
  std::snprintf(hex, sizeof hex, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(buf.str())));
  return hex;
}

nlohmann::json buildManifest(const std::string& subcommand, const nlohmann::json& config,
                             const std::map<std::string, std::string>& inputs,
                             const std::vector<std::string>& outputs) {
  nlohmann::json inputsJson = nlohmann::json::object();
  for (const auto& [name, path] : inputs)
    inputsJson[name] = {{"path", path}, {"digest", fileDigest(path)}};
  return nlohmann::json{{"tool", "mrnet"},
                        {"version", kVersion},
                        {"subcommand", subcommand},
                        {"config", config},
                        {"inputs", inputsJson},
                        {"outputs", outputs}};
}

void writeManifest(const std::string& dir, const nlohmann::json& manifest) {
  writeFileAtomic(dir + "/run_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace mrnet
