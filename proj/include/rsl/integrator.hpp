#pragma once

#include "rsl/problem.hpp"
#include "rsl/trajectory.hpp"

namespace rsl {

/// Solution pair w1 on [0, pi/2] and w2 on [pi/2, pi] at one lambda.
struct Solution {
  Trajectory w1;
  Trajectory w2;

  /// w1 on [0, pi/2], w2 on (pi/2, pi].
  State operator()(double x) const { return x <= kHalfPi ? w1(x) : w2(x); }
};

/// Method-of-steps integration of  w'' = -(lambda w + q(x) w(x - Delta(x))) / p^2  on one
/// subinterval, starting from `initial` at its left end. Dormand-Prince 5(4) with PI step
/// control, steps capped at pi p / (8 s); retarded values come from the trajectory's own
/// dense output (from the step being computed when the delay is shorter than the step).
Trajectory solve_segment(const ProblemSpec& spec, Side side, double lambda, State initial,
                         double tol);

/// w1 with w1(0) = a2, w1'(0) = -a1.
Trajectory solve_w1(const ProblemSpec& spec, double lambda, double tol);

/// w2 with w2(pi/2) = (gamma1/delta1) w1(pi/2), w2'(pi/2) = (gamma2/delta2) w1'(pi/2).
Trajectory solve_w2(const ProblemSpec& spec, double lambda, const Trajectory& w1, double tol);

Solution solve(const ProblemSpec& spec, double lambda, double tol);

/// Initial state of w2 from the end state of w1.
State transmit(const ProblemSpec& spec, State w1_end);

}  // namespace rsl
