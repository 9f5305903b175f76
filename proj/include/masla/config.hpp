#pragma once

#include <optional>
#include <string>
#include <vector>

#include "masla/ensemble.hpp"
#include "masla/grid.hpp"
#include "masla/kernel.hpp"
#include "masla/metrics.hpp"
#include "masla/target.hpp"

namespace masla {

enum class ReferenceKind { analytic_grid, long_run_pool };

struct KernelEntry {
  KernelConfig config;
  std::string label;             // unique within the experiment; defaults to the variant name
  std::optional<InitSpec> init;  // per-kernel start override
};

// Full description of one experiment, parsed from the key-value text format
// (see README). All defaults are applied at parse time so the canonical echo
// is self-contained.
struct ExperimentConfig {
  std::string experiment_id;
  std::string target_id = "quartic";
  TargetParams target_params;
  std::vector<KernelEntry> kernels;
  RunSpec run;
  std::vector<std::int64_t> schedule;  // ensembles only
  GridSpec grid;                       // histogram/TV grid
  bool metric_tv = false;
  bool metric_w2 = false;
  ReferenceKind reference = ReferenceKind::analytic_grid;
  std::string output_dir = "out";
  bool write_trajectories = false;

  bool operator==(const ExperimentConfig& other) const;
};

// Parses and validates; throws ConfigError with a line number on malformed
// input, unknown keys, unknown kernel/target ids, or constraint violations.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical serialization: parse_config_text(canonical_text(c)) == c.
std::string canonical_text(const ExperimentConfig& config);

const char* to_string(ReferenceKind r);

}  // namespace masla
