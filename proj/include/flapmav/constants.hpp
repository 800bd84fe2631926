#pragma once

#include <numbers>

namespace flapmav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGravity = 9.81;
inline constexpr double kAirDensity = 1.225;
inline constexpr double kAirViscosity = 1.48e-5;

constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

} // namespace flapmav
