#include "qsocket/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/bloch.hpp"
#include "qsocket/constants.hpp"
#include "qsocket/fencing.hpp"

namespace qsocket {

namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
template <class Body>
void parallel_rows(std::size_t n, int jobs, Body body) {
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double numerical_f_tilde(const PinningConfig& base, double wire_count) {
  if (wire_count != std::floor(wire_count)) {
    throw InvalidInput(fmt::format("numerical source needs integer wire counts, got {}", wire_count));
  }
  PinningConfig cfg = base;
  cfg.target_frequency.reset();
  cfg.max_wires = static_cast<std::size_t>(wire_count);
  const auto report = run_pinning(cfg);
  // The loop may stop short of the budget (stagnation); the row then carries
  // the frequency of the layout actually reached.
  return report.iterations.back().frequency / report.iterations.front().frequency;
}

}  // namespace

double coupling_scaling(double g0, double f_tilde) {
  if (!(f_tilde >= 1.0)) {
    throw InvalidInput(fmt::format("scaled frequency must be >= 1, got {}", f_tilde));
  }
  return g0 * std::pow(f_tilde, 1.5);
}

std::vector<double> SweepConfig::default_wire_counts() {
  std::vector<double> n(26);
  std::iota(n.begin(), n.end(), 0.0);
  return n;
}

void SweepConfig::validate() const {
  if (!(f_101 > 0.0) || !(f_q > 0.0)) throw InvalidInput("f_101 and f_q must be positive");
  if (!(g0 > 0.0)) throw InvalidInput("g0 must be positive");
  if (!(horizon > 0.0)) throw InvalidInput("horizon T must be positive");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw InvalidInput("T1 and T2 must be positive");
  if (t2 > 2.0 * t1) {
    throw InvalidInput(fmt::format("T2 = {:.6g} s exceeds 2 T1 = {:.6g} s", t2, 2.0 * t1));
  }
  if (!(p_threshold > 0.0 && p_threshold < 1.0)) throw InvalidInput("p_threshold must be in (0, 1)");
  if (wire_counts.empty()) throw InvalidInput("wire count list is empty");
  for (double n : wire_counts) {
    if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidInput("wire counts must be non-negative");
  }
  if (jobs < 1) throw InvalidInput("jobs must be >= 1");
  if (frequency_source == FrequencySource::numerical) pinning.validate();
}

std::optional<double> threshold_crossing(std::vector<double> detunings,
                                         std::vector<double> probabilities, double p_threshold) {
  if (detunings.size() != probabilities.size()) {
    throw InvalidInput("detuning and probability lists differ in length");
  }
  std::vector<std::size_t> order(detunings.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detunings[a] < detunings[b]; });

  const double floor = std::numeric_limits<double>::min();
  const double log_th = std::log(p_threshold);
  std::optional<double> best;
  auto consider = [&](double lo, double hi) {
    // |Δ| minimum over the closed interval [lo, hi].
    const double d = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
    if (!best || d < *best) best = d;
  };

  for (std::size_t j = 0; j < order.size(); ++j) {
    const double d0 = detunings[order[j]];
    const double p0 = probabilities[order[j]];
    if (p0 < p_threshold) consider(d0, d0);
    if (j + 1 == order.size()) break;
    const double d1 = detunings[order[j + 1]];
    const double p1 = probabilities[order[j + 1]];
    const bool below0 = p0 < p_threshold;
    const bool below1 = p1 < p_threshold;
    if (below0 && below1) {
      consider(d0, d1);
    } else if (below0 != below1 && d1 > d0) {
      const double l0 = std::log(std::max(p0, floor));
      const double l1 = std::log(std::max(p1, floor));
      const double t = (log_th - l0) / (l1 - l0);
      const double cross = d0 + t * (d1 - d0);
      if (below0) consider(d0, cross);
      else consider(cross, d1);
    }
  }
  return best;
}

SweepResult leakage_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result;
  result.rows.resize(cfg.wire_counts.size());

  parallel_rows(cfg.wire_counts.size(), cfg.jobs, [&](std::size_t i) {
    SweepRow row;
    row.wire_count = cfg.wire_counts[i];
    row.f_tilde = cfg.frequency_source == FrequencySource::analytic
                      ? frequency_from_wire_count(row.wire_count)
                      : numerical_f_tilde(cfg.pinning, row.wire_count);
    row.detuning = row.f_tilde * cfg.f_101 - cfg.f_q;
    row.coupling = coupling_scaling(cfg.g0, row.f_tilde);

    DynamicsConfig dyn;
    dyn.coupling_g = row.coupling;
    dyn.detuning = row.detuning;
    dyn.horizon = cfg.horizon;
    dyn.n_time_points = cfg.n_time_points;
    dyn.steps_per_period = cfg.steps_per_period;
    row.p_undamped = depolarizing_probability(dyn);
    if (cfg.damping) {
      dyn.gamma_r = 1.0 / cfg.t1;
      dyn.gamma_d = 1.0 / cfg.t2;
      row.p_damped = depolarizing_probability(dyn);
    } else {
      row.p_damped = std::numeric_limits<double>::quiet_NaN();
    }
    result.rows[i] = row;
  });

  std::vector<double> delta, p_u, p_d;
  for (const auto& r : result.rows) {
    delta.push_back(r.detuning);
    p_u.push_back(r.p_undamped);
    p_d.push_back(r.p_damped);
  }
  result.threshold_crossing_delta = threshold_crossing(delta, p_u, cfg.p_threshold);
  if (cfg.damping) result.damped_crossing_delta = threshold_crossing(delta, p_d, cfg.p_threshold);
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "N,f_tilde_c,delta_Hz,g_Hz,p_undamped,p_damped\n";
  for (const auto& r : result.rows) {
    fmt::print(out, "{:g},{:.12g},{:.9e},{:.9e},{:.9e},", r.wire_count, r.f_tilde, r.detuning,
               r.coupling, r.p_undamped);
    if (std::isnan(r.p_damped)) out << "\n";
    else fmt::print(out, "{:.9e}\n", r.p_damped);
  }
}

double multimode_error(const std::vector<double>& p_values) {
  double total = 0.0;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInput(fmt::format("probability {} is outside [0, 1]", p));
    }
    total += p;
  }
  return std::min(total, 1.0);
}

std::string_view to_string(CouplingRegime regime) {
  return regime == CouplingRegime::strong ? "strong" : "weak";
}

RegimeReport weak_coupling_regime_check(const CoupledSystem& sys, const QubitParameters& q) {
  RegimeReport report;
  const double fastest = std::max({q.relaxation_rate, q.dephasing_rate, sys.cavity_kappa});
  report.regime = 2.0 * constants::pi * std::abs(sys.coupling_g) > fastest ? CouplingRegime::strong
                                                                           : CouplingRegime::weak;
  if (sys.detuning != 0.0 &&
      std::abs(sys.detuning) >= kDispersiveRatio * std::abs(sys.coupling_g)) {
    report.purcell_rate = purcell_total_rate(sys, q);
  }
  return report;
}

}  // namespace qsocket
