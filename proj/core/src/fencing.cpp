#include "qsocket/fencing.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/errors.hpp"

namespace qsocket {

namespace {

std::int64_t checked_power(int base, int exponent) {
  if (base < 2) throw InvalidInput(fmt::format("division factor must be >= 2, got {}", base));
  if (exponent < 0) throw InvalidInput(fmt::format("iterations must be >= 0, got {}", exponent));
  std::int64_t value = 1;
  for (int i = 0; i < exponent; ++i) {
    if (value > (std::int64_t{1} << 40) / base) throw InvalidInput("fence iteration too deep");
    value *= base;
  }
  return value;
}

}  // namespace

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.z - b.z); }

std::int64_t FencePlan::cells_per_side() const {
  return checked_power(division_factor, iterations);
}

void FencePlan::validate() const {
  const auto m = cells_per_side();
  if (!(cavity_side > 0.0)) throw InvalidInput("cavity side must be positive");
  if (!(wire_diameter > 0.0)) throw InvalidInput("wire diameter must be positive");
  const double cell = cavity_side / static_cast<double>(m);
  if (!(cell > wire_diameter)) {
    throw InvalidInput(fmt::format("cell side {:.6g} m does not exceed wire diameter {:.6g} m",
                                   cell, wire_diameter));
  }
}

void WireLayout::validate(double cavity_side) const {
  if (!(diameter > 0.0)) throw InvalidInput("wire diameter must be positive");
  const double radius = 0.5 * diameter;
  for (const auto& c : centers) {
    if (!(c.x > 0.0 && c.x < cavity_side && c.z > 0.0 && c.z < cavity_side)) {
      throw InvalidInput(fmt::format("wire at ({:.6g}, {:.6g}) m is outside the cavity", c.x, c.z));
    }
    if (c.x < radius || c.z < radius || cavity_side - c.x < radius ||
        cavity_side - c.z < radius) {
      throw InvalidInput(fmt::format("wire at ({:.6g}, {:.6g}) m crosses a wall", c.x, c.z));
    }
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (distance(centers[i], centers[j]) < diameter) {
        throw InvalidInput(fmt::format("wires {} and {} overlap", i, j));
      }
    }
  }
}

std::int64_t fence_wire_count(int iterations, int division_factor) {
  const std::int64_t m = checked_power(division_factor, iterations);
  return (m + 1) * (m + 1) + 2 * m * (m + 1) - 2 * 4 * m;
}

double fence_scaled_frequency(int iterations, int division_factor) {
  return static_cast<double>(checked_power(division_factor, iterations));
}

double frequency_from_wire_count(double wire_count) {
  if (!(wire_count >= 0.0)) throw InvalidInput("wire count must be non-negative");
  return (2.0 + std::sqrt(1.0 + 3.0 * wire_count)) / 3.0;
}

WireLayout generate_fence_layout(const FencePlan& plan) {
  plan.validate();
  const std::int64_t m = plan.cells_per_side();
  const double cell = plan.cavity_side / static_cast<double>(m);
  if (m > 1 && 0.5 * cell < plan.wire_diameter) {
    throw InvalidInput(fmt::format(
        "fence wires overlap: spacing {:.6g} m is below the wire diameter {:.6g} m", 0.5 * cell,
        plan.wire_diameter));
  }

  // Half-cell lattice: index (i, k) sits at (i, k) · cell/2. A lattice point
  // carries a wire when it lies on a fence line (one even index) and is not a
  // cell center (both odd). Boundary points coincide with walls and are dropped.
  WireLayout layout;
  layout.diameter = plan.wire_diameter;
  const std::int64_t last = 2 * m;
  for (std::int64_t k = 1; k < last; ++k) {
    for (std::int64_t i = 1; i < last; ++i) {
      const bool on_fence = (i % 2 == 0) || (k % 2 == 0);
      if (!on_fence) continue;
      layout.centers.push_back({0.5 * cell * static_cast<double>(i),
                                0.5 * cell * static_cast<double>(k)});
    }
  }
  return layout;
}

std::vector<CellRect> cells_of(const FencePlan& plan) {
  plan.validate();
  const std::int64_t m = plan.cells_per_side();
  const double side = plan.cavity_side / static_cast<double>(m);
  std::vector<CellRect> cells;
  cells.reserve(static_cast<std::size_t>(m * m));
  for (std::int64_t k = 0; k < m; ++k) {
    for (std::int64_t i = 0; i < m; ++i) {
      cells.push_back({side * static_cast<double>(i), side * static_cast<double>(k), side});
    }
  }
  return cells;
}

void write_layout_csv(std::ostream& out, const WireLayout& layout) {
  out << "x_m,z_m,diameter_m\n";
  for (const auto& c : layout.centers) {
    fmt::print(out, "{:.9e},{:.9e},{:.9e}\n", c.x, c.z, layout.diameter);
  }
}

WireLayout read_layout_csv(std::istream& in, double default_diameter) {
  WireLayout layout;
  layout.diameter = default_diameter;
  std::string line;
  if (!std::getline(in, line)) return layout;
  if (line.rfind("x_m,z_m,diameter_m", 0) != 0) {
    throw InvalidInput("layout CSV must start with header x_m,z_m,diameter_m");
  }
  bool have_diameter = false;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    double x = 0.0, z = 0.0, d = 0.0;
    char c1 = 0, c2 = 0;
    if (!(fields >> x >> c1 >> z >> c2 >> d) || c1 != ',' || c2 != ',') {
      throw InvalidInput(fmt::format("layout CSV row {} is malformed: '{}'", row, line));
    }
    if (have_diameter && d != layout.diameter) {
      throw InvalidInput(fmt::format("layout CSV row {} changes the wire diameter", row));
    }
    layout.diameter = d;
    have_diameter = true;
    layout.centers.push_back({x, z});
  }
  return layout;
}

}  // namespace qsocket
