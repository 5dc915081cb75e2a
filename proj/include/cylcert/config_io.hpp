#pragma once

// Reading and writing configuration files.
//
// {
//   "schema_version": "1",
//   "lines": [{"label": "l1+", "point": [1, 0, 0], "direction": [0, 0, 1]}, ...],
//   "parallel_pairs": [["l1+", "l1-"], ...]
// }
//
// Floats are written with 17 significant digits, so parse followed by
// serialize reproduces a serialized file byte for byte.

#include "cylcert/canon.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cylcert {

inline constexpr const char* kSchemaVersion = "1";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& location, const std::string& message)
      : std::runtime_error(location.empty() ? message : location + ": " + message), location_(location) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

std::string serialize_config(const LineConfiguration& cfg);
LineConfiguration parse_config(const std::string& text);

LineConfiguration read_config(const std::string& path);
void write_config(const LineConfiguration& cfg, const std::string& path);

/// 17 significant digits; -0 is written as 0.
std::string format_double(double v);

/// FNV-1a, 64 bit, as 16 hex digits.
std::string digest(const std::string& bytes);

}  // namespace cylcert
