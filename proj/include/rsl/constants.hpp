#pragma once

#include <numbers>

namespace rsl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;  // exact: halving is lossless

/// The two subintervals [0, pi/2] and [pi/2, pi] separated by the transmission point.
enum class Side { Left, Right };

constexpr double side_lo(Side side) { return side == Side::Left ? 0.0 : kHalfPi; }
constexpr double side_hi(Side side) { return side == Side::Left ? kHalfPi : kPi; }
constexpr const char* side_name(Side side) { return side == Side::Left ? "left" : "right"; }

/// Serial is the reference path; Parallel distributes independent work items with OpenMP.
enum class Execution { Serial, Parallel };

}  // namespace rsl
