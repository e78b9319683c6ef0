#pragma once

#include "rsl/problem.hpp"
#include "rsl/qnorms.hpp"
#include "rsl/trajectory.hpp"

namespace rsl {

struct ResidualReport {
  /// max |p w'' + q w(x - Delta) + lambda w| with w'' from central differences of w'.
  double sup_ode_defect = 0.0;
  /// max |w(x) - (right side of the Volterra equation)| over both subintervals.
  double sup_integral_defect = 0.0;
  int grid_size = 0;
};

inline constexpr int kResidualGridPoints = 2048;
inline constexpr double kDefectStep = 1e-5;

/// Defects of a (w1, w2) pair on a uniform grid of `grid` intervals per subinterval.
/// The integral term is accumulated cell by cell with 4-point Gauss-Legendre.
ResidualReport residual(const ProblemSpec& spec, double lambda, const Trajectory& w1,
                        const Trajectory& w2, int grid = kResidualGridPoints);

/// |gamma1 w1(pi/2) - delta1 w2(pi/2)|, |gamma2 w1'(pi/2) - delta2 w2'(pi/2)| and the
/// magnitude they should be compared against.
struct TransmissionResidual {
  double value = 0.0;
  double derivative = 0.0;
  double scale = 1.0;

  bool within(double rel) const { return value <= rel * scale && derivative <= rel * scale; }
};

TransmissionResidual transmission_residual(const ProblemSpec& spec, const Trajectory& w1,
                                           const Trajectory& w2);

/// Sampled amplitudes of w1, w1'/s and w2 against the a priori bounds, with
/// K = sqrt(4 q1^2 a2^2 + p1^2 a1^2):
///   |w1| <= K / q1,   |w1'| / s <= K / (p1 q1),
///   |w2| <= (2 / q1) K (|gamma1/delta1| + |p2 gamma2 / (p1 delta2)|).
/// Not applicable when q1 = 0 or lambda < max{4 q1^2, 4 q2^2}.
struct AmplitudeBounds {
  bool applicable = false;
  double w1_sup = 0.0;
  double w1_bound = 0.0;
  double dw1_scaled_sup = 0.0;
  double dw1_scaled_bound = 0.0;
  double w2_sup = 0.0;
  double w2_bound = 0.0;

  /// Smallest (bound - measured) over the three inequalities.
  double slack() const;
};

AmplitudeBounds amplitude_bounds(const ProblemSpec& spec, const QNorms& norms,
                                 const Trajectory& w1, const Trajectory& w2,
                                 int grid = kResidualGridPoints);

}  // namespace rsl
