#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kinhydro/collision_models.hpp"

namespace kinhydro {

/**
 * @brief Validated run configuration shared by all subcommands.
 *
 * Values come from a flat `key = value` file with flag overrides applied on
 * top. Lists are comma separated.
 */
struct RunConfig
{
  int dim = 2;
  int max_degree = 6;
  int grid = 32;
  double box_length = 6.283185307179586;
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  double dt = 1.0 / 256.0;
  double T = 0.5;
  double ell = 2.0;
  double k = 3.0;
  ModelKind model = ModelKind::HardSphere;
  double relaxation_rate = 1.0;
  double amplitude = 0.05;
  unsigned seed = 7;
  std::filesystem::path output_dir = "out";
  std::filesystem::path cache_dir = "cache";

  /// Canonical `key = value` lines in key order, doubles with 17 significant digits.
  std::string canonical() const;
  /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
  std::string fingerprint() const;
};

/// Keys accepted in config files and as overrides.
const std::vector<std::string>& config_keys();

/// Parses `key = value` text; '#' starts a comment. Throws ValidationError on unknown keys or bad values.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/**
 * Builds a config from an optional file and overrides (flags win). Throws
 * ValidationError naming the unknown key and listing the valid ones, or naming
 * the violated constraint.
 */
RunConfig parse_config(const std::filesystem::path& path, const std::map<std::string, std::string>& overrides = {});
RunConfig make_config(const std::map<std::string, std::string>& values);

/// Checks the invariants; throws ValidationError naming the first violated constraint.
void validate(const RunConfig& config);

/// 17-significant-digit representation.
std::string format_double(double x);

std::uint64_t fnv1a(const std::string& text);

}  // namespace kinhydro
