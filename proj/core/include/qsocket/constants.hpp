#pragma once

#include <numbers>

/// CODATA 2018 exact/recommended values. Every module reads constants from here.
namespace qsocket::constants {

inline constexpr double pi = std::numbers::pi;

/// m/s (exact)
inline constexpr double speed_of_light = 299'792'458.0;
/// J s (exact)
inline constexpr double planck = 6.626'070'15e-34;
/// F/m
inline constexpr double vacuum_permittivity = 8.854'187'8128e-12;

}  // namespace qsocket::constants
