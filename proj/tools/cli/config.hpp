#pragma once

// One YAML file with a section per workflow. Every quantity carries its unit
// in the key name; unknown sections or keys are rejected.

#include <filesystem>
#include <optional>
#include <string>

#include "qsocket/analysis.hpp"
#include "qsocket/fencing.hpp"
#include "qsocket/physics.hpp"
#include "qsocket/pinning.hpp"

namespace qsocket::cli {

struct ModesSection {
  int count = 10;
};

struct FenceSection {
  FencePlan plan{2, 1};
  bool solve = false;
};

struct PinSection {
  PinningConfig config;
  std::optional<std::filesystem::path> seed_layout;
  bool write_fields = false;
};

struct LeakageSection {
  SweepConfig sweep;
  bool plot = true;
};

struct RunConfig {
  CavityGeometry cavity;
  ModesSection modes;
  FenceSection fence;
  /// Grid and solver settings shared by fence --solve, pin and the numerical sweep.
  Grid grid;
  SolverOptions solver;
  PinSection pin;
  LeakageSection leakage;
};

/// Defaults: the 72 × 3 × 72 mm package, 500 µm wires and the leakage
/// parameter set f_q = 6 GHz, f_101 = 3 GHz, g0 = 4 MHz, T = 250 ns.
[[nodiscard]] RunConfig default_config();

/// Parses YAML text over the defaults. Throws InvalidInput on syntax errors,
/// unknown keys and out-of-range values.
[[nodiscard]] RunConfig parse_config(const std::string& yaml_text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Copies the shared grid, solver and permittivity into the per-workflow configs.
void propagate_shared(RunConfig& cfg);

}  // namespace qsocket::cli
