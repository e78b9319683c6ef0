#include "rsl/qnorms.hpp"

#include <cmath>

#include "rsl/quadrature.hpp"

namespace rsl {

QNorms compute_qnorms(const ProblemSpec& spec) {
  auto abs_q = [](const CoefficientExpr& q) { return [&q](double x) { return std::abs(q(x)); }; };
  QNorms out;
  out.q1 = integrate(abs_q(spec.q_left), 0.0, kHalfPi, 1e-10, kHalfPi / 16) / spec.p1;
  out.q2 = integrate(abs_q(spec.q_right), kHalfPi, kPi, 1e-10, kHalfPi / 16) / spec.p2;
  return out;
}

}  // namespace rsl
