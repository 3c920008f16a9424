#pragma once

// Semiclassical qubit/cavity-mode dynamics (generalized Maxwell-Bloch
// equations in the interaction picture, zero temperature) and the
// depolarizing error probability derived from them.

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace qsocket {

/// Qubit density matrix in the interaction picture, reduced to its three real
/// degrees of freedom: rho_gg = 1 - rho_ee and rho_eg = conj(rho_ge).
struct BlochState {
  double rho_ee = 1.0;
  double rho_ge_re = 0.0;
  double rho_ge_im = 0.0;

  [[nodiscard]] double rho_gg() const { return 1.0 - rho_ee; }
  /// 0 <= rho_ee <= 1 and |rho_ge|² <= rho_ee (1 - rho_ee) + tolerance.
  [[nodiscard]] bool is_physical(double tolerance = 1e-9) const;
};

struct DynamicsConfig {
  double coupling_g = 0.0;   // Hz
  double detuning = 0.0;     // Δ = f_c - f_q, Hz
  double gamma_r = 0.0;      // 1/s
  double gamma_d = 0.0;      // 1/s
  double horizon = 250e-9;   // s
  std::size_t n_time_points = 2000;
  /// RK4 steps per fastest time scale; the step is at most
  /// 1 / (steps_per_period · max(g, |Δ|, (γr+γd)/2π)).
  double steps_per_period = 200.0;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<BlochState> states;
};

/// Largest RK4 step allowed for `cfg`.
[[nodiscard]] double max_step(const DynamicsConfig& cfg);

/// Classical RK4 with fixed step; samples `n_time_points` equally spaced times
/// on [0, horizon]. Throws IntegratorInstability if rho_ee leaves
/// [-1e-6, 1 + 1e-6], InvalidInput on a bad config or unphysical start.
[[nodiscard]] Trajectory integrate_maxwell_bloch(const DynamicsConfig& cfg,
                                                 const BlochState& initial = {});

/// P_e(t) = rho_ee(t).
[[nodiscard]] std::vector<double> excited_probability_trace(const Trajectory& trajectory);

/// p = 1 - (1/T) ∫ P_e dt by the trapezoidal rule on the output samples,
/// clamped into [0, 1]. Starts from |e>.
[[nodiscard]] double depolarizing_probability(const DynamicsConfig& cfg);

/// Same trajectory-average applied to an existing trace.
[[nodiscard]] double depolarizing_probability(const Trajectory& trajectory);

/// p with the coherent channel switched off (g = 0), damping kept.
[[nodiscard]] double incoherent_floor(const DynamicsConfig& cfg);

/// CSV with header time_s,rho_ee,re_rho_ge,im_rho_ge.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace qsocket
