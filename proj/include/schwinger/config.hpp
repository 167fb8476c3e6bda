#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "schwinger/device.hpp"
#include "schwinger/spectroscopy.hpp"

namespace schwinger {

/// Device constants plus experiment knobs, read from `key = value` files.
/// Units at this boundary: pH, nF, ueV, MHz/GHz, kHz, nV, us, ns.
struct RunConfig {
  DeviceParams device = reference_device();
  SweepPlan plan;
  /// Subcommand the file was written for; empty means any.
  std::string experiment;
  /// Keys that were set explicitly, in the order seen.
  std::vector<std::string> keys;
};

/// Applies one setting. Throws SimError(kConfig) on unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines; `#` starts a comment.
void read_config(std::istream& in, RunConfig& config, const std::string& origin = "<stream>");

void load_config_file(const std::filesystem::path& path, RunConfig& config);

/// Splits "key=value" from the command line.
void apply_override(RunConfig& config, const std::string& assignment);

std::vector<std::string> known_config_keys();

}  // namespace schwinger
