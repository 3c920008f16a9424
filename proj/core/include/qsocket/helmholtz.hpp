#pragma once

// Scalar 2D Helmholtz eigenproblem −∇²u = k²u on the square cross-section,
// u = 0 on the walls and on every node covered by a (perfectly conducting)
// wire. Only TE_n0l-type modes are represented, so f = c k / (2π sqrt(eps_r)).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "qsocket/fencing.hpp"

namespace qsocket {

/// Uniform node grid over [0, L]² including the boundary nodes.
struct Grid {
  double side = 72e-3;
  int resolution = 257;

  [[nodiscard]] double spacing() const { return side / (resolution - 1); }
  [[nodiscard]] double coordinate(int index) const { return index * spacing(); }
  [[nodiscard]] std::size_t node_count() const {
    return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
  /// resolution >= 33, side > 0.
  void validate() const;
};

/// Conductor flags per grid node, row-major (index = k * resolution + i, with
/// i along x and k along z).
struct ConductorMask {
  int resolution = 0;
  std::vector<std::uint8_t> cells;

  [[nodiscard]] bool at(int i, int k) const {
    return cells[static_cast<std::size_t>(k) * resolution + i] != 0;
  }
  [[nodiscard]] std::size_t count() const;
};

/// |E| sampled on the grid, max-normalized over unmasked nodes; zero on the
/// walls and on conductors.
struct FieldMap {
  Grid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  [[nodiscard]] double at(int i, int k) const {
    return values[static_cast<std::size_t>(k) * grid.resolution + i];
  }
};

struct EigenSolution {
  double wavenumber = 0.0;   // k, 1/m
  double frequency = 0.0;    // Hz
  FieldMap field;
  /// Signed mode shape on the full grid, unit discrete 2-norm.
  std::vector<double> eigenvector;
  bool converged = false;
  /// ||A u − λ u|| / (λ ||u||) for the grid operator A.
  double residual = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double relative_permittivity = 1.0;
  /// Seed of the deterministic start block; fixes the representative of
  /// degenerate eigenspaces.
  std::uint64_t seed = 0x5eed;
  int max_iterations = 10000;
  double eigenvalue_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
  /// Extra Ritz vectors carried beyond the requested count.
  int guard_vectors = 6;
};

/// A node is masked iff it lies within diameter/2 of a wire center. Wires with
/// diameter < 2h mask exactly the nearest interior node. Throws InvalidInput
/// for wires outside the domain.
[[nodiscard]] ConductorMask rasterize_wires(const Grid& grid, const WireLayout& layout);

/// Lowest Dirichlet eigenpair. Throws ConvergenceError (carrying the final
/// residual) when the iteration cap is hit, InvalidInput when no free node is left.
[[nodiscard]] EigenSolution dominant_eigenmode(const Grid& grid, const ConductorMask& mask,
                                               const SolverOptions& options = {});

/// The `count` (<= 12) lowest eigenpairs with non-decreasing frequency.
[[nodiscard]] std::vector<EigenSolution> eigenmodes(const Grid& grid, const ConductorMask& mask,
                                                    int count, const SolverOptions& options = {});

/// Default spacing between accepted antinodes: max(diameter, 3h).
[[nodiscard]] double default_min_separation(const Grid& grid, double wire_diameter);

/// Greedy antinode picker. Candidates are 8-neighbourhood local maxima with
/// value >= threshold; they are accepted in descending field order (ties go
/// to the smallest (x, z) index) when at least `min_separation` away from every
/// accepted point and every entry of `existing`. Throws InvalidInput if no
/// candidate exists.
[[nodiscard]] std::vector<Point2> find_antinodes(const FieldMap& field, double threshold,
                                                 double min_separation,
                                                 std::span<const Point2> existing = {});

/// CSV dump: a '#' header line with L and resolution, then one row of
/// comma-separated values per z index.
void write_field_csv(std::ostream& out, const FieldMap& field);
/// Binary 8-bit PGM (P5), max-normalized; row 0 is z = L so the image is upright.
void write_field_pgm(std::ostream& out, const FieldMap& field);

}  // namespace qsocket
