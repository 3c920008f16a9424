#pragma once

// Closed-form cavity electromagnetics and Jaynes-Cummings relations.
//
// All frequencies are linear frequencies in hertz. Factors of 2π only appear
// inside the Bloch integrator.

#include <cstddef>
#include <vector>

#include "qsocket/errors.hpp"

namespace qsocket {

/// Rectangular box of size a (x) × b (y) × e (z), optionally filled with a dielectric.
struct CavityGeometry {
  double length_a = 72e-3;
  double height_b = 3e-3;
  double depth_e = 72e-3;
  double relative_permittivity = 1.0;

  /// Square cross-section L × L with height H.
  static CavityGeometry square(double side, double height, double eps_r = 1.0) {
    return {side, height, side, eps_r};
  }

  [[nodiscard]] double volume() const { return length_a * height_b * depth_e; }
  /// c / sqrt(eps_r)
  [[nodiscard]] double wave_speed() const;
  /// Throws InvalidInput.
  void validate() const;
};

struct QubitParameters {
  double transition_frequency = 6e9;   // Hz
  double dipole_moment = 0.0;          // C m
  double relaxation_rate = 0.0;        // gamma_r, 1/s
  double dephasing_rate = 0.0;         // gamma_d, 1/s

  /// gamma_r = 1/T1, gamma_d = 1/(2 T1) + 1/tau_phi.
  static QubitParameters from_times(double f_q, double p_q, double t1, double tau_phi);

  void validate() const;
};

/// Half-wavelength counts along x (n), y (m) and z (l).
struct CavityModeIndex {
  int n = 1;
  int m = 0;
  int l = 1;

  friend bool operator==(const CavityModeIndex&, const CavityModeIndex&) = default;
};

struct CoupledSystem {
  double coupling_g = 0.0;     // Hz
  double detuning = 0.0;       // f_c - f_q, Hz
  double cavity_kappa = 0.0;   // 1/s
};

struct DressedPair {
  double lower;   // |-,0>
  double upper;   // |+,0>
};

struct ModeEntry {
  CavityModeIndex index;
  double frequency;
};

/// f_nml = (c/sqrt(eps_r))/2 · sqrt((n/a)² + (m/b)² + (l/e)²). Rejects (0,0,0).
[[nodiscard]] double mode_frequency(const CavityGeometry& geom, CavityModeIndex idx);

/// The `count` lowest closed-form modes, ascending in frequency, ties broken by
/// (n, m, l). Only indices with at most one zero entry are standing modes of a
/// closed box, so e.g. (1,0,0) is skipped.
[[nodiscard]] std::vector<ModeEntry> lowest_modes(const CavityGeometry& geom, std::size_t count);

/// Vacuum field amplitude sqrt(h f_c / (2 eps_0 V)).
[[nodiscard]] double zero_point_field(const CavityGeometry& geom, double f_c);

/// Zero-point field of the lowest mode of a square cell of side a = c/(sqrt 2 f_c)
/// and height H: (1/c) sqrt(h f_c³ / (eps_0 H)). `max_frequency` is the cutoff
/// implied by the smallest physically realisable cell; f_c above it is rejected.
/// `cell_side` is checked against the cutoff only through `max_frequency`.
[[nodiscard]] double cell_zero_point_field(double cell_side, double height, double f_c,
                                           double max_frequency);

/// g = E0 p_q / h, qubit assumed at a field antinode.
[[nodiscard]] double coupling_from_field(double field, double dipole_moment);

/// Dressed-state transition frequencies f_c ∓ sqrt(g² + Δ²)/2 − Δ/2.
[[nodiscard]] DressedPair dressed_frequencies(double f_c, double g, double detuning);

/// Dispersive qubit decay (γr+γd)/2 + (g/Δ)² κ. Warns (code "non_dispersive")
/// when |Δ| < 5g, throws InvalidInput when Δ = 0.
[[nodiscard]] double purcell_total_rate(const CoupledSystem& sys, const QubitParameters& q,
                                        Warnings* warnings = nullptr);

/// Cavity-mediated qubit-qubit coupling g²/Δ. Same warning policy as above.
[[nodiscard]] double dispersive_qq_coupling(double g, double detuning,
                                            Warnings* warnings = nullptr);

/// Ratio |Δ|/g below which dispersive formulas are flagged.
inline constexpr double kDispersiveRatio = 5.0;

}  // namespace qsocket
