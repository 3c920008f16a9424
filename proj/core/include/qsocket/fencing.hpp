#pragma once

// Half-wave fencing: split the L × L cross-section into n^(2d) square cells
// with fences of wires, raising each cell's dominant frequency by n^d.
//
// Coordinates are measured from a cavity corner, x and z in-plane.

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qsocket {

struct Point2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

[[nodiscard]] double distance(const Point2& a, const Point2& b);

struct FencePlan {
  int division_factor = 2;   // n
  int iterations = 0;        // d
  double cavity_side = 72e-3;
  double wire_diameter = 500e-6;

  /// n^d
  [[nodiscard]] std::int64_t cells_per_side() const;
  /// Requires n >= 2, d >= 0, positive sizes and L / n^d > diameter.
  void validate() const;
};

/// Wires of a common diameter inside the L × L cross-section.
struct WireLayout {
  std::vector<Point2> centers;
  double diameter = 500e-6;

  [[nodiscard]] std::size_t size() const { return centers.size(); }
  [[nodiscard]] bool empty() const { return centers.empty(); }

  /// Centers strictly inside (0, L)², wire disks clear of the walls, and no two
  /// centers closer than one diameter. Throws InvalidInput.
  void validate(double cavity_side) const;
};

struct CellRect {
  double x0;
  double z0;
  double side;
};

/// (n^d+1)² + 2 n^d (n^d+1) − 8 n^d, i.e. interior fence nodes plus interior
/// edge midpoints.
[[nodiscard]] std::int64_t fence_wire_count(int iterations, int division_factor = 2);

/// Dominant-mode frequency of one cell relative to the bare cavity: n^d.
[[nodiscard]] double fence_scaled_frequency(int iterations, int division_factor = 2);

/// Inverse of the wire count relation: (2 + sqrt(1 + 3N)) / 3. Accepts real N >= 0.
[[nodiscard]] double frequency_from_wire_count(double wire_count);

/// Wires at every interior cell corner and at the midpoint of every interior
/// cell edge. Throws InvalidInput when the wires would overlap.
[[nodiscard]] WireLayout generate_fence_layout(const FencePlan& plan);

/// n^(2d) squares of side L / n^d, row-major in z then x.
[[nodiscard]] std::vector<CellRect> cells_of(const FencePlan& plan);

/// CSV with header x_m,z_m,diameter_m.
void write_layout_csv(std::ostream& out, const WireLayout& layout);
/// Reads the format written by write_layout_csv. All rows must share one
/// diameter; an empty body yields an empty layout with `default_diameter`.
[[nodiscard]] WireLayout read_layout_csv(std::istream& in, double default_diameter = 500e-6);

}  // namespace qsocket
