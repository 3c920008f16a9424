#pragma once

// Reference solutions written independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qsocket::oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kC = 299792458.0;

/// State (ρee, Re ρ̃ge, Im ρ̃ge) at time t from exp(M t) of the affine system
/// written as a 4×4 homogeneous matrix.
inline Eigen::Vector3d bloch_expm(double g, double delta, double gamma_r, double gamma_d,
                                  double t, const Eigen::Vector3d& x0 = {1.0, 0.0, 0.0}) {
  const double wg = 2.0 * kPi * g;
  const double wd = 2.0 * kPi * delta;
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  // d(ρee)/dt = wg v − γr ρee
  m(0, 0) = -gamma_r;
  m(0, 2) = wg;
  // du/dt = wd v − γd u
  m(1, 1) = -gamma_d;
  m(1, 2) = wd;
  // dv/dt = (wg/2)(1 − 2ρee) − wd u − γd v
  m(2, 0) = -wg;
  m(2, 1) = -wd;
  m(2, 2) = -gamma_d;
  m(2, 3) = 0.5 * wg;
  Eigen::Vector4d y(x0[0], x0[1], x0[2], 1.0);
  const Eigen::Matrix4d e = (m * t).exp();
  const Eigen::Vector4d r = e * y;
  return r.head<3>();
}

/// Undamped generalized Rabi population 1 − (g²/Ω²) sin²(πΩt), Ω = √(g²+Δ²).
inline double rabi_population(double g, double delta, double t) {
  const double omega = std::hypot(g, delta);
  if (omega == 0.0) return 1.0;
  const double s = std::sin(kPi * omega * t);
  return 1.0 - (g * g) / (omega * omega) * s * s;
}

/// Exact time average of 1 − rabi_population over [0, T].
inline double rabi_average_loss(double g, double delta, double horizon) {
  const double omega = std::hypot(g, delta);
  if (omega == 0.0) return 0.0;
  const double x = 2.0 * kPi * omega * horizon;
  return (g * g) / (omega * omega) * (0.5 - std::sin(x) / (2.0 * x));
}

/// Eigenvalues of the 5-point Dirichlet Laplacian with nodes 0..r−1 (boundary
/// included), in grid units, sorted ascending; the first `count` values.
inline std::vector<double> discrete_laplacian_eigenvalues(int resolution, int count) {
  const int n = resolution - 1;
  std::vector<double> values;
  for (int p = 1; p < n && p <= count + 2; ++p) {
    for (int q = 1; q < n && q <= count + 2; ++q) {
      const double sp = std::sin(p * kPi / (2.0 * n));
      const double sq = std::sin(q * kPi / (2.0 * n));
      values.push_back(4.0 * (sp * sp + sq * sq));
    }
  }
  std::sort(values.begin(), values.end());
  values.resize(static_cast<std::size_t>(count));
  return values;
}

inline double frequency_from_grid_eigenvalue(double lambda, double side, int resolution,
                                             double eps_r = 1.0) {
  const double h = side / (resolution - 1);
  return kC * std::sqrt(lambda) / h / (2.0 * kPi * std::sqrt(eps_r));
}

/// Fence wire positions by explicit construction: every cell corner and every
/// cell-edge midpoint of an m×m tiling, minus those on the outer walls. Returned
/// in half-cell units.
inline std::set<std::pair<std::int64_t, std::int64_t>> fence_points(std::int64_t m) {
  std::set<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::int64_t i = 0; i <= m; ++i) {
    for (std::int64_t k = 0; k <= m; ++k) {
      pts.insert({2 * i, 2 * k});                           // corner
      if (i < m) pts.insert({2 * i + 1, 2 * k});            // horizontal edge midpoint
      if (k < m) pts.insert({2 * i, 2 * k + 1});            // vertical edge midpoint
    }
  }
  std::set<std::pair<std::int64_t, std::int64_t>> interior;
  for (const auto& p : pts) {
    if (p.first > 0 && p.first < 2 * m && p.second > 0 && p.second < 2 * m) interior.insert(p);
  }
  return interior;
}

/// Dressed branches written directly in terms of f_R: (f_c+f_R)/2 ∓ √(g²+(f_c−f_R)²)/2.
inline std::pair<double, double> anticrossing_branches(double f_c, double g, double f_r) {
  const double mid = 0.5 * (f_c + f_r);
  const double half = 0.5 * std::sqrt(g * g + (f_c - f_r) * (f_c - f_r));
  return {mid - half, mid + half};
}

/// Trapezoid average of f over n equally spaced samples on [0, T].
template <class F>
double trapezoid_average(F f, double horizon, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(n - 1);
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    sum += w * f(t);
  }
  return sum / static_cast<double>(n - 1);
}

}  // namespace qsocket::oracle
