#include "qsocket/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/constants.hpp"
#include "qsocket/errors.hpp"

namespace qsocket {

namespace {

constexpr double kPopulationSlack = 1e-6;

struct Rates {
  double coupling;   // 2πg
  double detuning;   // 2πΔ
  double gamma_r;
  double gamma_d;
};

BlochState derivative(const Rates& r, const BlochState& s) {
  return {
      r.coupling * s.rho_ge_im - r.gamma_r * s.rho_ee,
      r.detuning * s.rho_ge_im - r.gamma_d * s.rho_ge_re,
      0.5 * r.coupling * (1.0 - 2.0 * s.rho_ee) - r.detuning * s.rho_ge_re -
          r.gamma_d * s.rho_ge_im,
  };
}

BlochState axpy(const BlochState& x, double a, const BlochState& k) {
  return {x.rho_ee + a * k.rho_ee, x.rho_ge_re + a * k.rho_ge_re, x.rho_ge_im + a * k.rho_ge_im};
}

BlochState rk4_step(const Rates& r, const BlochState& s, double h) {
  const BlochState k1 = derivative(r, s);
  const BlochState k2 = derivative(r, axpy(s, 0.5 * h, k1));
  const BlochState k3 = derivative(r, axpy(s, 0.5 * h, k2));
  const BlochState k4 = derivative(r, axpy(s, h, k3));
  const double w = h / 6.0;
  return {
      s.rho_ee + w * (k1.rho_ee + 2.0 * k2.rho_ee + 2.0 * k3.rho_ee + k4.rho_ee),
      s.rho_ge_re + w * (k1.rho_ge_re + 2.0 * k2.rho_ge_re + 2.0 * k3.rho_ge_re + k4.rho_ge_re),
      s.rho_ge_im + w * (k1.rho_ge_im + 2.0 * k2.rho_ge_im + 2.0 * k3.rho_ge_im + k4.rho_ge_im),
  };
}

}  // namespace

bool BlochState::is_physical(double tolerance) const {
  if (!std::isfinite(rho_ee) || !std::isfinite(rho_ge_re) || !std::isfinite(rho_ge_im)) {
    return false;
  }
  if (rho_ee < -tolerance || rho_ee > 1.0 + tolerance) return false;
  const double coherence = rho_ge_re * rho_ge_re + rho_ge_im * rho_ge_im;
  return coherence <= rho_ee * (1.0 - rho_ee) + tolerance;
}

void DynamicsConfig::validate() const {
  if (!(horizon > 0.0)) throw InvalidInput("horizon must be positive");
  if (n_time_points < 2) throw InvalidInput("need at least two time points");
  if (coupling_g < 0.0) throw InvalidInput("coupling must be non-negative");
  if (gamma_r < 0.0 || gamma_d < 0.0) throw InvalidInput("damping rates must be non-negative");
  if (!(steps_per_period > 0.0)) throw InvalidInput("steps_per_period must be positive");
  if (!std::isfinite(detuning)) throw InvalidInput("detuning must be finite");
}

double max_step(const DynamicsConfig& cfg) {
  const double fastest = std::max({cfg.coupling_g, std::abs(cfg.detuning),
                                   (cfg.gamma_r + cfg.gamma_d) / (2.0 * constants::pi)});
  if (fastest <= 0.0) return cfg.horizon;
  return 1.0 / (cfg.steps_per_period * fastest);
}

Trajectory integrate_maxwell_bloch(const DynamicsConfig& cfg, const BlochState& initial) {
  cfg.validate();
  if (!initial.is_physical()) throw InvalidInput("initial Bloch state is not a density matrix");

  const Rates rates{2.0 * constants::pi * cfg.coupling_g, 2.0 * constants::pi * cfg.detuning,
                    cfg.gamma_r, cfg.gamma_d};
  const std::size_t intervals = cfg.n_time_points - 1;
  const double dt_out = cfg.horizon / static_cast<double>(intervals);
  const auto substeps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(dt_out / max_step(cfg) - 1e-12)));
  const double h = dt_out / static_cast<double>(substeps);

  Trajectory out;
  out.times.reserve(cfg.n_time_points);
  out.states.reserve(cfg.n_time_points);
  out.times.push_back(0.0);
  out.states.push_back(initial);

  BlochState state = initial;
  for (std::size_t i = 1; i <= intervals; ++i) {
    for (std::size_t k = 0; k < substeps; ++k) state = rk4_step(rates, state, h);
    if (!(state.rho_ee >= -kPopulationSlack && state.rho_ee <= 1.0 + kPopulationSlack)) {
      throw IntegratorInstability(
          fmt::format("population left [0,1] at t = {:.6g} s (rho_ee = {:.6g})",
                      static_cast<double>(i) * dt_out, state.rho_ee),
          state.rho_ee);
    }
    out.times.push_back(static_cast<double>(i) * dt_out);
    out.states.push_back(state);
  }
  return out;
}

std::vector<double> excited_probability_trace(const Trajectory& trajectory) {
  std::vector<double> pe;
  pe.reserve(trajectory.states.size());
  for (const auto& s : trajectory.states) pe.push_back(s.rho_ee);
  return pe;
}

double depolarizing_probability(const Trajectory& trajectory) {
  const auto& t = trajectory.times;
  const auto& s = trajectory.states;
  if (t.size() < 2 || t.size() != s.size()) throw InvalidInput("trajectory needs >= 2 samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw InvalidInput("trajectory has zero duration");

  double integral = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    integral += 0.5 * (t[i] - t[i - 1]) * (s[i].rho_ee + s[i - 1].rho_ee);
  }
  return std::clamp(1.0 - integral / span, 0.0, 1.0);
}

double depolarizing_probability(const DynamicsConfig& cfg) {
  return depolarizing_probability(integrate_maxwell_bloch(cfg));
}

double incoherent_floor(const DynamicsConfig& cfg) {
  DynamicsConfig bare = cfg;
  bare.coupling_g = 0.0;
  // Without coupling the detuning only rotates rho_ge, which starts at zero.
  bare.detuning = 0.0;
  return depolarizing_probability(bare);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "time_s,rho_ee,re_rho_ge,im_rho_ge\n";
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const auto& s = trajectory.states[i];
    fmt::print(out, "{:.10e},{:.12g},{:.12g},{:.12g}\n", trajectory.times[i], s.rho_ee,
               s.rho_ge_re, s.rho_ge_im);
  }
}

}  // namespace qsocket
