#pragma once

// Antinode pinning: solve the dominant mode, put wires on its antinodes,
// re-solve, and repeat until a target frequency or wire budget is reached.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qsocket/fencing.hpp"
#include "qsocket/helmholtz.hpp"

namespace qsocket {

struct PinningConfig {
  std::optional<double> target_frequency;   // Hz
  std::size_t max_wires = 300;
  double wire_diameter = 500e-6;
  double threshold = 0.9;
  /// Spacing between wires placed in the same pass and from existing wires.
  /// Unset means default_min_separation(grid, wire_diameter), which packs
  /// continuous ridges densely; 4 mm spreads each pass around the cavity.
  std::optional<double> min_separation = 4e-3;
  Grid grid;
  SolverOptions solver;

  void validate() const;
};

enum class PinningStatus {
  target_reached,
  wire_budget_reached,
  stagnated,
  no_placement,   // antinodes found but none could take a wire
};

[[nodiscard]] std::string_view to_string(PinningStatus status);

struct PinningIteration {
  int iteration = 0;                 // d; 0 is the initial (possibly seeded) layout
  std::size_t wires_added = 0;
  std::size_t total_wires = 0;       // N
  double frequency = 0.0;            // Hz
  std::size_t skipped_overlaps = 0;  // antinodes rejected because a wire would touch another
};

struct PinningReport {
  std::vector<PinningIteration> iterations;
  WireLayout final_layout;
  EigenSolution final_solution;
  PinningStatus status = PinningStatus::wire_budget_reached;
};

/// Called after every solve, including the initial one.
using PinningObserver = std::function<void(const PinningIteration&, const EigenSolution&)>;

/// Runs the pinning loop. Seeds in `initial` (diameter taken from the config)
/// form iteration 0. The loop ends with `target_reached`, `wire_budget_reached`,
/// `stagnated` (less than 0.1% frequency gain across the last two passes) or
/// `no_placement`.
[[nodiscard]] PinningReport run_pinning(const PinningConfig& cfg, const WireLayout& initial = {},
                                        const PinningObserver& observer = {});

/// (N, f_c) after every pass, starting with the initial layout.
[[nodiscard]] std::vector<std::pair<std::size_t, double>> pinning_frequency_curve(
    const PinningConfig& cfg);
[[nodiscard]] std::vector<std::pair<std::size_t, double>> pinning_frequency_curve(
    const PinningReport& report);

/// CSV with header iteration,wires_added,N_total,f_c_Hz.
void write_pinning_report_csv(std::ostream& out, const PinningReport& report);

/// Relative gain across two passes below which the loop reports stagnation.
inline constexpr double kStagnationGain = 1e-3;

}  // namespace qsocket
