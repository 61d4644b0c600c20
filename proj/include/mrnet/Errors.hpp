#pragma once

#include <stdexcept>
#include <string>

namespace mrnet {

// Caller-facing failures: malformed input data, unsatisfiable preconditions
// rooted in the data. The CLI maps these to exit code 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration: out-of-range thresholds, unknown config keys,
// contradictory flags. Also exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A violated internal invariant: a bug, not a user mistake. Exit code 2.
class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrnet
