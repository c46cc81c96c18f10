#pragma once

#include "zubov/trainer.hpp"

#include <string>
#include <vector>

namespace zubov {

/// Full run configuration: the training block plus subcommand options.
struct RunConfig {
  TrainConfig train;
  int grid_resolution = 201;
  double contour_level = 0.9;
  int slice_axis0 = 0;
  int slice_axis1 = 1;
  std::vector<std::pair<int, double>> slice_pins;
  double fdm_h = 0.0;  // 0 = automatic step
  double fdm_tol = 1e-6;
  int fdm_max_sweeps = 5000;
};

/// Benchmark default profile, omega and rollout guards resolved.
RunConfig default_config(const std::string& system_name);

/// Line-oriented `key = value` file with `#` comments. Unknown keys, bad
/// values and out-of-range values raise ParseError with the line number;
/// missing keys take the per-system defaults.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Writes every key with its resolved value; the output parses back to the
/// same configuration.
void write_run_metadata(const RunConfig& config, const std::string& path);
std::string run_metadata_text(const RunConfig& config);

/// The documented key set (echo-completeness checks).
const std::vector<std::string>& config_key_names();

}  // namespace zubov
