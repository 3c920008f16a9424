#include "qsocket/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "qsocket/constants.hpp"
#include "qsocket/errors.hpp"

namespace qsocket {

namespace {

constexpr int kMaxModes = 12;

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Free (unknown) nodes of the discretized membrane and the 5-point operator
/// restricted to them, in grid units (stencil 4, −1).
struct Discretization {
  std::vector<int> node_of_unknown;   // unknown -> flat grid node
  std::vector<int> unknown_of_node;   // flat grid node -> unknown or -1
  SparseMatrix laplacian;
};

Discretization discretize(const Grid& grid, const ConductorMask& mask) {
  const int r = grid.resolution;
  Discretization d;
  d.unknown_of_node.assign(grid.node_count(), -1);
  for (int k = 1; k < r - 1; ++k) {
    for (int i = 1; i < r - 1; ++i) {
      if (mask.at(i, k)) continue;
      const int node = k * r + i;
      d.unknown_of_node[node] = static_cast<int>(d.node_of_unknown.size());
      d.node_of_unknown.push_back(node);
    }
  }
  const auto n = static_cast<Eigen::Index>(d.node_of_unknown.size());
  if (n == 0) throw InvalidInput("no free grid node left: the conductors fill the cavity");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 5);
  const int offsets[4] = {-1, 1, -r, r};
  for (Eigen::Index u = 0; u < n; ++u) {
    const int node = d.node_of_unknown[static_cast<std::size_t>(u)];
    triplets.emplace_back(u, u, 4.0);
    for (int off : offsets) {
      const int v = d.unknown_of_node[static_cast<std::size_t>(node + off)];
      if (v >= 0) triplets.emplace_back(u, v, -1.0);
    }
  }
  d.laplacian.resize(n, n);
  d.laplacian.setFromTriplets(triplets.begin(), triplets.end());
  d.laplacian.makeCompressed();
  return d;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& block) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
  return qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), block.cols());
}

/// Flip the sign so the largest-magnitude entry (first one on ties) is positive.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

EigenSolution make_solution(const Grid& grid, const ConductorMask& mask,
                            const Discretization& d, const Eigen::VectorXd& vec,
                            double eigenvalue, double residual, bool converged, int iterations,
                            double eps_r) {
  EigenSolution sol;
  const double h = grid.spacing();
  sol.wavenumber = std::sqrt(eigenvalue) / h;
  sol.frequency = constants::speed_of_light * sol.wavenumber /
                  (2.0 * constants::pi * std::sqrt(eps_r));
  sol.residual = residual;
  sol.converged = converged;
  sol.iterations = iterations;

  sol.eigenvector.assign(grid.node_count(), 0.0);
  double peak = 0.0;
  for (Eigen::Index u = 0; u < vec.size(); ++u) {
    const double value = vec(u);
    sol.eigenvector[static_cast<std::size_t>(d.node_of_unknown[static_cast<std::size_t>(u)])] =
        value;
    peak = std::max(peak, std::abs(value));
  }
  sol.field.grid = grid;
  sol.field.mask = mask.cells;
  sol.field.values.assign(grid.node_count(), 0.0);
  if (peak > 0.0) {
    for (std::size_t node = 0; node < sol.eigenvector.size(); ++node) {
      sol.field.values[node] = std::abs(sol.eigenvector[node]) / peak;
    }
  }
  return sol;
}

double bilinear(const FieldMap& field, double x, double z) {
  const int r = field.grid.resolution;
  const int i = std::clamp(static_cast<int>(std::floor(x)), 0, r - 2);
  const int k = std::clamp(static_cast<int>(std::floor(z)), 0, r - 2);
  const double fx = x - i;
  const double fz = z - k;
  return (1 - fx) * (1 - fz) * field.at(i, k) + fx * (1 - fz) * field.at(i + 1, k) +
         (1 - fx) * fz * field.at(i, k + 1) + fx * fz * field.at(i + 1, k + 1);
}

/// Crest of an elongated ridge (e.g. the ring-shaped antinode around a pinned
/// center): the Hessian has one strongly negative curvature, at least
/// kRidgeAnisotropy times the other in magnitude, and the node is a maximum
/// along that direction. Round peaks never qualify, so they keep a single
/// candidate at their 8-neighbourhood maximum.
constexpr double kRidgeAnisotropy = 3.0;

bool on_ridge_crest(const FieldMap& field, int i, int k) {
  const double v = field.at(i, k);
  const double uxx = field.at(i + 1, k) - 2.0 * v + field.at(i - 1, k);
  const double uzz = field.at(i, k + 1) - 2.0 * v + field.at(i, k - 1);
  const double uxz = 0.25 * (field.at(i + 1, k + 1) - field.at(i + 1, k - 1) -
                             field.at(i - 1, k + 1) + field.at(i - 1, k - 1));
  const double mean = 0.5 * (uxx + uzz);
  const double radius = std::hypot(0.5 * (uxx - uzz), uxz);
  const double steep = mean - radius;   // most negative curvature
  const double flat = mean + radius;
  if (!(steep < 0.0) || std::abs(steep) < kRidgeAnisotropy * std::abs(flat)) return false;

  // Eigenvector of the Hessian for `steep`.
  double ex = uxz;
  double ez = steep - uxx;
  if (std::hypot(ex, ez) < 1e-300) {
    ex = steep - uzz;
    ez = uxz;
  }
  const double norm = std::hypot(ex, ez);
  if (norm < 1e-300) return false;
  ex /= norm;
  ez /= norm;
  return v >= bilinear(field, i + ex, k + ez) && v >= bilinear(field, i - ex, k - ez);
}

}  // namespace

void Grid::validate() const {
  if (!(side > 0.0)) throw InvalidInput("grid side must be positive");
  if (resolution < 33) {
    throw InvalidInput(fmt::format("grid resolution must be >= 33, got {}", resolution));
  }
}

std::size_t ConductorMask::count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(),
                                                [](std::uint8_t c) { return c != 0; }));
}

ConductorMask rasterize_wires(const Grid& grid, const WireLayout& layout) {
  grid.validate();
  const int r = grid.resolution;
  const double h = grid.spacing();
  ConductorMask mask;
  mask.resolution = r;
  mask.cells.assign(grid.node_count(), 0);

  const double radius = 0.5 * layout.diameter;
  for (const auto& c : layout.centers) {
    if (!(c.x > 0.0 && c.x < grid.side && c.z > 0.0 && c.z < grid.side)) {
      throw InvalidInput(
          fmt::format("wire at ({:.6g}, {:.6g}) m lies outside the grid domain", c.x, c.z));
    }
    if (layout.diameter < 2.0 * h) {
      const int i = std::clamp(static_cast<int>(std::lround(c.x / h)), 1, r - 2);
      const int k = std::clamp(static_cast<int>(std::lround(c.z / h)), 1, r - 2);
      mask.cells[static_cast<std::size_t>(k) * r + i] = 1;
      continue;
    }
    const int i0 = std::max(1, static_cast<int>(std::floor((c.x - radius) / h)));
    const int i1 = std::min(r - 2, static_cast<int>(std::ceil((c.x + radius) / h)));
    const int k0 = std::max(1, static_cast<int>(std::floor((c.z - radius) / h)));
    const int k1 = std::min(r - 2, static_cast<int>(std::ceil((c.z + radius) / h)));
    for (int k = k0; k <= k1; ++k) {
      for (int i = i0; i <= i1; ++i) {
        if (std::hypot(i * h - c.x, k * h - c.z) <= radius) {
          mask.cells[static_cast<std::size_t>(k) * r + i] = 1;
        }
      }
    }
  }
  return mask;
}

std::vector<EigenSolution> eigenmodes(const Grid& grid, const ConductorMask& mask, int count,
                                      const SolverOptions& options) {
  grid.validate();
  if (count < 1 || count > kMaxModes) {
    throw InvalidInput(fmt::format("mode count must be in [1, {}], got {}", kMaxModes, count));
  }
  if (mask.resolution != grid.resolution || mask.cells.size() != grid.node_count()) {
    throw InvalidInput("conductor mask does not match the grid");
  }
  if (!(options.relative_permittivity >= 1.0)) {
    throw InvalidInput("relative permittivity must be >= 1");
  }

  const Discretization d = discretize(grid, mask);
  const Eigen::Index n = d.laplacian.rows();
  if (n < count) throw InvalidInput("fewer free grid nodes than requested modes");
  const Eigen::Index block =
      std::min<Eigen::Index>(n, count + std::max(0, options.guard_vectors));

  Eigen::SimplicialLDLT<SparseMatrix> factor(d.laplacian);
  if (factor.info() != Eigen::Success) {
    throw ConvergenceError("sparse factorization of the grid operator failed", 0.0);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  x = orthonormalize(x);

  // Subspace (block inverse) iteration with Rayleigh-Ritz projection.
  Eigen::VectorXd ritz = Eigen::VectorXd::Constant(block, 0.0);
  Eigen::VectorXd previous = Eigen::VectorXd::Constant(block, -1.0);
  Eigen::VectorXd residuals = Eigen::VectorXd::Constant(count, 1.0);
  int iteration = 0;
  bool converged = false;
  while (iteration < options.max_iterations) {
    ++iteration;
    const Eigen::MatrixXd q = orthonormalize(factor.solve(x));
    const Eigen::MatrixXd aq = d.laplacian * q;
    const Eigen::MatrixXd projected = q.transpose() * aq;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 *
                                                         (projected + projected.transpose()));
    ritz = small.eigenvalues();
    x = q * small.eigenvectors();
    const Eigen::MatrixXd ax = aq * small.eigenvectors();

    bool done = true;
    for (int j = 0; j < count; ++j) {
      const double lambda = ritz(j);
      residuals(j) = (ax.col(j) - lambda * x.col(j)).norm() / (lambda * x.col(j).norm());
      const double change = std::abs(lambda - previous(j)) / lambda;
      if (!(residuals(j) < options.residual_tolerance && change < options.eigenvalue_tolerance)) {
        done = false;
      }
    }
    previous = ritz;
    if (done) {
      converged = true;
      break;
    }
  }

  const double worst = residuals.maxCoeff();
  if (!converged) {
    throw ConvergenceError(
        fmt::format("eigensolver did not converge in {} iterations (residual {:.3e})",
                    options.max_iterations, worst),
        worst);
  }

  std::vector<EigenSolution> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Eigen::VectorXd v = x.col(j).normalized();
    canonical_sign(v);
    out.push_back(make_solution(grid, mask, d, v, ritz(j), residuals(j), true, iteration,
                                options.relative_permittivity));
  }
  return out;
}

EigenSolution dominant_eigenmode(const Grid& grid, const ConductorMask& mask,
                                 const SolverOptions& options) {
  auto modes = eigenmodes(grid, mask, 1, options);
  return std::move(modes.front());
}

double default_min_separation(const Grid& grid, double wire_diameter) {
  return std::max(wire_diameter, 3.0 * grid.spacing());
}

std::vector<Point2> find_antinodes(const FieldMap& field, double threshold, double min_separation,
                                   std::span<const Point2> existing) {
  const Grid& grid = field.grid;
  const int r = grid.resolution;
  if (field.values.size() != grid.node_count()) throw InvalidInput("field does not match grid");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidInput("antinode threshold must be in (0, 1]");
  }
  if (!(min_separation >= 0.0)) throw InvalidInput("min_separation must be non-negative");

  struct Candidate {
    double value;
    int i;
    int k;
  };
  std::vector<Candidate> candidates;
  for (int k = 1; k < r - 1; ++k) {
    for (int i = 1; i < r - 1; ++i) {
      const double v = field.at(i, k);
      if (v < threshold) continue;
      if (!field.mask.empty() && field.mask[static_cast<std::size_t>(k) * r + i] != 0) continue;
      bool local_max = true;
      for (int dk = -1; dk <= 1 && local_max; ++dk) {
        for (int di = -1; di <= 1; ++di) {
          if ((di != 0 || dk != 0) && field.at(i + di, k + dk) > v) {
            local_max = false;
            break;
          }
        }
      }
      if (local_max || on_ridge_crest(field, i, k)) candidates.push_back({v, i, k});
    }
  }
  if (candidates.empty()) {
    throw InvalidInput(
        fmt::format("no field maximum reaches the antinode threshold {:.3g}", threshold));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.i != b.i) return a.i < b.i;
    return a.k < b.k;
  });

  const double h = grid.spacing();
  std::vector<Point2> accepted;
  for (const auto& c : candidates) {
    const Point2 p{c.i * h, c.k * h};
    const auto too_close = [&](const Point2& q) { return distance(p, q) < min_separation; };
    if (std::any_of(accepted.begin(), accepted.end(), too_close)) continue;
    if (std::any_of(existing.begin(), existing.end(), too_close)) continue;
    accepted.push_back(p);
  }
  return accepted;
}

}  // namespace qsocket
