#pragma once

#include <vector>

#include "rsl/problem.hpp"
#include "rsl/trajectory.hpp"

namespace rsl {

struct PicardResult {
  Trajectory w1;
  Trajectory w2;
  int iterations = 0;  // summed over both subintervals
  /// Successive sup-norm update ratios, left subinterval first.
  std::vector<double> ratios;
};

inline constexpr int kPicardGridPoints = 4096;

/// Fixed-point iteration of the Volterra integral equations for w1 and then w2
///   w(x) = base(x) - 1/(s p) * int_lo^x q(t) sin(s (x - t)/p) w(t - Delta(t)) dt
/// on a uniform grid, trapezoid quadrature, cubic interpolation for retarded values.
/// Stops when successive iterates differ by less than `tol` in the sup norm.
/// Throws ConvergenceError (with the last contraction ratio) after `max_iters`.
PicardResult picard_solve(const ProblemSpec& spec, double lambda, int max_iters, double tol,
                          int grid_points = kPicardGridPoints);

}  // namespace rsl
