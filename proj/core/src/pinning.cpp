#include "qsocket/pinning.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/errors.hpp"

namespace qsocket {

namespace {

constexpr std::size_t kWireLimit = 300;

bool fits(const Point2& p, const WireLayout& layout, double side) {
  const double radius = 0.5 * layout.diameter;
  if (p.x < radius || p.z < radius || side - p.x < radius || side - p.z < radius) return false;
  return std::none_of(layout.centers.begin(), layout.centers.end(),
                      [&](const Point2& q) { return distance(p, q) < layout.diameter; });
}

}  // namespace

void PinningConfig::validate() const {
  grid.validate();
  if (max_wires > kWireLimit) {
    throw InvalidInput(fmt::format("max_wires must be <= {}, got {}", kWireLimit, max_wires));
  }
  if (target_frequency && !(*target_frequency > 0.0)) {
    throw InvalidInput("target frequency must be positive");
  }
  if (!(wire_diameter > 0.0) || wire_diameter >= grid.side) {
    throw InvalidInput("wire diameter must be positive and smaller than the cavity");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidInput("antinode threshold must be in (0, 1]");
  }
  if (min_separation && !(*min_separation >= 0.0)) {
    throw InvalidInput("min_separation must be non-negative");
  }
}

std::string_view to_string(PinningStatus status) {
  switch (status) {
    case PinningStatus::target_reached: return "target_reached";
    case PinningStatus::wire_budget_reached: return "wire_budget_reached";
    case PinningStatus::stagnated: return "stagnated";
    case PinningStatus::no_placement: return "no_placement";
  }
  return "unknown";
}

PinningReport run_pinning(const PinningConfig& cfg, const WireLayout& initial,
                          const PinningObserver& observer) {
  cfg.validate();
  WireLayout layout = initial;
  layout.diameter = cfg.wire_diameter;
  layout.validate(cfg.grid.side);

  const double separation =
      cfg.min_separation.value_or(default_min_separation(cfg.grid, cfg.wire_diameter));

  PinningReport report;
  auto solve = [&] { return dominant_eigenmode(cfg.grid, rasterize_wires(cfg.grid, layout), cfg.solver); };

  EigenSolution solution = solve();
  report.iterations.push_back({0, layout.size(), layout.size(), solution.frequency, 0});
  if (observer) observer(report.iterations.back(), solution);

  for (int d = 1;; ++d) {
    if (cfg.target_frequency && solution.frequency >= *cfg.target_frequency) {
      report.status = PinningStatus::target_reached;
      break;
    }
    if (layout.size() >= cfg.max_wires) {
      report.status = PinningStatus::wire_budget_reached;
      break;
    }

    std::vector<Point2> antinodes;
    try {
      antinodes = find_antinodes(solution.field, cfg.threshold, separation, layout.centers);
    } catch (const InvalidInput&) {
      report.status = PinningStatus::no_placement;
      break;
    }

    PinningIteration step;
    step.iteration = d;
    for (const auto& p : antinodes) {
      if (layout.size() >= cfg.max_wires) break;
      if (!fits(p, layout, cfg.grid.side)) {
        ++step.skipped_overlaps;
        continue;
      }
      layout.centers.push_back(p);
      ++step.wires_added;
    }
    if (step.wires_added == 0) {
      report.status = PinningStatus::no_placement;
      break;
    }

    const double before = solution.frequency;
    solution = solve();
    if (solution.frequency < before * (1.0 - 1e-9)) {
      // Dirichlet domain monotonicity guarantees this never happens.
      throw ConvergenceError(
          fmt::format("dominant frequency dropped from {:.9g} to {:.9g} Hz after adding wires",
                      before, solution.frequency),
          solution.residual);
    }
    step.total_wires = layout.size();
    step.frequency = solution.frequency;
    report.iterations.push_back(step);
    if (observer) observer(report.iterations.back(), solution);

    const std::size_t n = report.iterations.size();
    if (n >= 3) {
      const double reference = report.iterations[n - 3].frequency;
      if (step.frequency < reference * (1.0 + kStagnationGain)) {
        report.status = PinningStatus::stagnated;
        break;
      }
    }
  }

  report.final_layout = std::move(layout);
  report.final_solution = std::move(solution);
  return report;
}

std::vector<std::pair<std::size_t, double>> pinning_frequency_curve(const PinningReport& report) {
  std::vector<std::pair<std::size_t, double>> curve;
  curve.reserve(report.iterations.size());
  for (const auto& it : report.iterations) curve.emplace_back(it.total_wires, it.frequency);
  return curve;
}

std::vector<std::pair<std::size_t, double>> pinning_frequency_curve(const PinningConfig& cfg) {
  return pinning_frequency_curve(run_pinning(cfg));
}

void write_pinning_report_csv(std::ostream& out, const PinningReport& report) {
  out << "iteration,wires_added,N_total,f_c_Hz\n";
  for (const auto& it : report.iterations) {
    fmt::print(out, "{},{},{},{:.9e}\n", it.iteration, it.wires_added, it.total_wires,
               it.frequency);
  }
}

}  // namespace qsocket
