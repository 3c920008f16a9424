#include "qsocket/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <fmt/format.h>

#include "qsocket/constants.hpp"

namespace qsocket {

namespace {

void warn_if_not_dispersive(double g, double detuning, Warnings* warnings) {
  if (warnings == nullptr || std::abs(detuning) >= kDispersiveRatio * g) return;
  warnings->push_back({"non_dispersive",
                       fmt::format("|detuning| = {:.6g} Hz is below {}·g = {:.6g} Hz; "
                                   "dispersive approximation is not reliable",
                                   std::abs(detuning), kDispersiveRatio, kDispersiveRatio * g)});
}

bool is_standing_mode(const CavityModeIndex& idx) {
  const int zeros = (idx.n == 0) + (idx.m == 0) + (idx.l == 0);
  return zeros <= 1;
}

}  // namespace

double CavityGeometry::wave_speed() const {
  return constants::speed_of_light / std::sqrt(relative_permittivity);
}

void CavityGeometry::validate() const {
  if (!(length_a > 0.0) || !(height_b > 0.0) || !(depth_e > 0.0)) {
    throw InvalidInput(fmt::format("cavity dimensions must be positive (a={}, b={}, e={})",
                                   length_a, height_b, depth_e));
  }
  if (!(relative_permittivity >= 1.0)) {
    throw InvalidInput(
        fmt::format("relative permittivity must be >= 1, got {}", relative_permittivity));
  }
}

QubitParameters QubitParameters::from_times(double f_q, double p_q, double t1, double tau_phi) {
  if (!(t1 > 0.0) || !(tau_phi > 0.0)) {
    throw InvalidInput("T1 and tau_phi must be positive");
  }
  QubitParameters q;
  q.transition_frequency = f_q;
  q.dipole_moment = p_q;
  q.relaxation_rate = 1.0 / t1;
  q.dephasing_rate = 1.0 / (2.0 * t1) + 1.0 / tau_phi;
  q.validate();
  return q;
}

void QubitParameters::validate() const {
  if (!(transition_frequency > 0.0)) {
    throw InvalidInput("qubit transition frequency must be positive");
  }
  if (relaxation_rate < 0.0 || dephasing_rate < 0.0 || dipole_moment < 0.0) {
    throw InvalidInput("qubit rates and dipole moment must be non-negative");
  }
}

double mode_frequency(const CavityGeometry& geom, CavityModeIndex idx) {
  geom.validate();
  if (idx.n < 0 || idx.m < 0 || idx.l < 0) {
    throw InvalidInput("mode indices must be non-negative");
  }
  if (idx.n == 0 && idx.m == 0 && idx.l == 0) {
    throw InvalidInput("mode index (0,0,0) is not a resonance");
  }
  const double kx = idx.n / geom.length_a;
  const double ky = idx.m / geom.height_b;
  const double kz = idx.l / geom.depth_e;
  return 0.5 * geom.wave_speed() * std::sqrt(kx * kx + ky * ky + kz * kz);
}

std::vector<ModeEntry> lowest_modes(const CavityGeometry& geom, std::size_t count) {
  geom.validate();
  if (count == 0) return {};

  // Any index beyond `count` along an axis is dominated by `count` cheaper
  // modes along that same axis, so this box is always large enough.
  const int limit = static_cast<int>(count) + 1;
  std::vector<ModeEntry> modes;
  for (int n = 0; n <= limit; ++n) {
    for (int m = 0; m <= limit; ++m) {
      for (int l = 0; l <= limit; ++l) {
        const CavityModeIndex idx{n, m, l};
        if (!is_standing_mode(idx)) continue;
        modes.push_back({idx, mode_frequency(geom, idx)});
      }
    }
  }
  std::sort(modes.begin(), modes.end(), [](const ModeEntry& a, const ModeEntry& b) {
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    return std::tie(a.index.n, a.index.m, a.index.l) < std::tie(b.index.n, b.index.m, b.index.l);
  });
  modes.resize(std::min(count, modes.size()));
  return modes;
}

double zero_point_field(const CavityGeometry& geom, double f_c) {
  const double volume = geom.volume();
  if (!(volume > 0.0)) throw InvalidInput("cavity volume must be positive");
  if (!(f_c > 0.0)) throw InvalidInput("cavity frequency must be positive");
  return std::sqrt(constants::planck * f_c / (2.0 * constants::vacuum_permittivity * volume));
}

double cell_zero_point_field(double cell_side, double height, double f_c, double max_frequency) {
  if (!(cell_side > 0.0) || !(height > 0.0)) {
    throw InvalidInput("cell side and height must be positive");
  }
  if (!(f_c > 0.0)) throw InvalidInput("cavity frequency must be positive");
  if (f_c > max_frequency) {
    throw InvalidInput(fmt::format("f_c = {:.6g} Hz exceeds the cell cutoff {:.6g} Hz", f_c,
                                   max_frequency));
  }
  return std::sqrt(constants::planck * f_c * f_c * f_c /
                   (constants::vacuum_permittivity * height)) /
         constants::speed_of_light;
}

double coupling_from_field(double field, double dipole_moment) {
  if (field < 0.0 || dipole_moment < 0.0) {
    throw InvalidInput("field and dipole moment must be non-negative");
  }
  return field * dipole_moment / constants::planck;
}

DressedPair dressed_frequencies(double f_c, double g, double detuning) {
  if (g < 0.0) throw InvalidInput("coupling must be non-negative");
  const double half_split = 0.5 * std::hypot(g, detuning);
  const double center = f_c - 0.5 * detuning;
  return {center - half_split, center + half_split};
}

double purcell_total_rate(const CoupledSystem& sys, const QubitParameters& q, Warnings* warnings) {
  if (sys.detuning == 0.0) throw InvalidInput("Purcell rate is undefined at zero detuning");
  if (sys.coupling_g < 0.0) throw InvalidInput("coupling must be non-negative");
  warn_if_not_dispersive(sys.coupling_g, sys.detuning, warnings);
  const double ratio = sys.coupling_g / sys.detuning;
  return 0.5 * (q.relaxation_rate + q.dephasing_rate) + ratio * ratio * sys.cavity_kappa;
}

double dispersive_qq_coupling(double g, double detuning, Warnings* warnings) {
  if (detuning == 0.0) throw InvalidInput("dispersive coupling is undefined at zero detuning");
  if (g < 0.0) throw InvalidInput("coupling must be non-negative");
  warn_if_not_dispersive(g, detuning, warnings);
  return g * g / detuning;
}

}  // namespace qsocket
