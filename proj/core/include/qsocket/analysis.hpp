#pragma once

// Leakage budgets across fencing/pinning wire counts, multi-mode totals,
// regime labelling and the dressed-state anticrossing fit.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qsocket/errors.hpp"
#include "qsocket/physics.hpp"
#include "qsocket/pinning.hpp"

namespace qsocket {

/// g(N) = g0 · f̃^{3/2}: the cell zero-point field scales as f^{3/2} at fixed
/// height and dipole moment. Throws InvalidInput for f̃ < 1.
[[nodiscard]] double coupling_scaling(double g0, double f_tilde);

enum class FrequencySource { analytic, numerical };

struct SweepConfig {
  double f_101 = 3e9;
  double f_q = 6e9;
  double g0 = 4e6;
  double horizon = 250e-9;
  double t1 = 100e-6;
  double t2 = 50e-6;
  /// Wire counts to evaluate. Non-integer values are accepted by the
  /// analytic source (the closed form is continuous in N).
  std::vector<double> wire_counts = default_wire_counts();
  double p_threshold = 0.0057;
  std::size_t n_time_points = 2000;
  double steps_per_period = 200.0;
  FrequencySource frequency_source = FrequencySource::analytic;
  /// Used by the numerical source: one pinning run capped at each N.
  PinningConfig pinning;
  bool damping = true;
  int jobs = 1;

  /// T2 <= 2 T1, positive frequencies and times, non-empty N list.
  void validate() const;

  /// 0, 1, ..., 25.
  [[nodiscard]] static std::vector<double> default_wire_counts();
};

struct SweepRow {
  double wire_count = 0.0;
  double f_tilde = 1.0;
  double detuning = 0.0;   // f̃ f_101 − f_q, Hz
  double coupling = 0.0;   // g, Hz
  double p_undamped = 0.0;
  double p_damped = 0.0;   // NaN when damping is off
};

struct SweepResult {
  std::vector<SweepRow> rows;   // same order as SweepConfig::wire_counts
  /// Smallest |Δ| on the interpolated p_undamped curve where p < p_th; empty
  /// if the curve never crosses.
  std::optional<double> threshold_crossing_delta;
  std::optional<double> damped_crossing_delta;
};

[[nodiscard]] SweepResult leakage_sweep(const SweepConfig& cfg);

/// Threshold crossing on a (Δ, p) curve. Points are ordered by Δ and joined
/// piecewise linearly in log p; returns the smallest |Δ| at which that curve
/// is below p_th, or nothing if it never is.
[[nodiscard]] std::optional<double> threshold_crossing(std::vector<double> detunings,
                                                       std::vector<double> probabilities,
                                                       double p_threshold);

/// CSV with header N,f_tilde_c,delta_Hz,g_Hz,p_undamped,p_damped.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Σ p clamped to 1. Throws InvalidInput for entries outside [0, 1].
[[nodiscard]] double multimode_error(const std::vector<double>& p_values);

struct AnticrossingPoint {
  double f_r = 0.0;     // Hz
  double lower = 0.0;   // Hz
  double upper = 0.0;   // Hz
  /// Optional 1σ uncertainties; both branches are weighted by 1/σ².
  std::optional<double> sigma_lower;
  std::optional<double> sigma_upper;
};

struct AnticrossingData {
  std::vector<AnticrossingPoint> points;

  /// At least 4 points, lower < upper, not all f_R equal.
  void validate() const;
};

struct AnticrossingFit {
  double coupling_g = 0.0;     // Hz
  double cavity_frequency = 0.0;   // f_c, Hz
  /// 95% confidence half-widths.
  double coupling_g_ci = 0.0;
  double cavity_frequency_ci = 0.0;
  double rms_residual = 0.0;   // Hz
  int iterations = 0;
  std::size_t degrees_of_freedom = 0;
};

/// Joint least-squares fit of both branches to
///   f∓ = (f_c + f_R)/2 ∓ √(g² + (f_c − f_R)²)/2.
/// Throws InvalidInput on bad data and ConvergenceError if the solver fails.
[[nodiscard]] AnticrossingFit fit_anticrossing(const AnticrossingData& data);

/// Reads f_R_Hz,lower_Hz,upper_Hz[,sigma_lower_Hz,sigma_upper_Hz].
[[nodiscard]] AnticrossingData read_anticrossing_csv(std::istream& in);
void write_fit_report(std::ostream& out, const AnticrossingFit& fit);

enum class CouplingRegime { strong, weak };

[[nodiscard]] std::string_view to_string(CouplingRegime regime);

struct RegimeReport {
  CouplingRegime regime = CouplingRegime::weak;
  /// Present when |Δ| >= 5g and Δ != 0.
  std::optional<double> purcell_rate;
};

/// strong iff 2πg > max(γr, γd, κ); equality counts as weak.
[[nodiscard]] RegimeReport weak_coupling_regime_check(const CoupledSystem& sys,
                                                      const QubitParameters& q);

}  // namespace qsocket
