#pragma once

#include <algorithm>

#include "rsl/problem.hpp"

namespace rsl {

/// q1 = (1/p1) int_0^{pi/2} |q|,  q2 = (1/p2) int_{pi/2}^{pi} |q|.
struct QNorms {
  double q1 = 0.0;
  double q2 = 0.0;

  /// Smallest lambda for which the amplitude bounds on w1, w2 apply: max{4 q1^2, 4 q2^2}.
  double bound_lambda() const { return 4.0 * std::max(q1 * q1, q2 * q2); }
};

QNorms compute_qnorms(const ProblemSpec& spec);

}  // namespace rsl
