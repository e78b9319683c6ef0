#include "rsl/residual.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rsl/integrator.hpp"

namespace rsl {

namespace {

constexpr std::array<double, 4> kGaussNode{-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeight{0.3478548451374538, 0.6521451548625461,
                                             0.6521451548625461, 0.3478548451374538};

double retarded_w(const ProblemSpec& spec, Side side, const Trajectory& w, double x) {
  const double r = x - spec.delay(side)(x);
  return w(std::clamp(r, w.lower(), w.upper())).w;
}

double integral_defect(const ProblemSpec& spec, Side side, double lambda, const Trajectory& w,
                       State initial, int grid) {
  const double lo = side_lo(side);
  const double hi = side_hi(side);
  const double p = spec.p(side);
  const double s = std::sqrt(lambda);
  const double omega = s / p;
  const double h = (hi - lo) / grid;
  const CoefficientExpr& q = spec.q(side);

  double c_sum = 0.0, s_sum = 0.0, worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = i == grid ? hi : lo + i * h;
    if (i > 0) {
      const double a = lo + (i - 1) * h;
      for (int k = 0; k < 4; ++k) {
        const double t = a + 0.5 * h * (1.0 + kGaussNode[k]);
        const double g = 0.5 * h * kGaussWeight[k] * q(t) * retarded_w(spec, side, w, t);
        c_sum += g * std::cos(omega * t);
        s_sum += g * std::sin(omega * t);
      }
    }
    const double base = initial.w * std::cos(omega * (x - lo)) +
                        initial.dw / omega * std::sin(omega * (x - lo));
    const double rhs = base - (std::sin(omega * x) * c_sum - std::cos(omega * x) * s_sum) / (s * p);
    worst = std::max(worst, std::abs(rhs - w(x).w));
  }
  return worst;
}

double ode_defect(const ProblemSpec& spec, Side side, double lambda, const Trajectory& w,
                  int grid) {
  const double lo = side_lo(side);
  const double hi = side_hi(side);
  const double p = spec.p(side);
  const double h = (hi - lo) / grid;
  const CoefficientExpr& q = spec.q(side);
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double x = std::clamp(lo + i * h, lo + kDefectStep, hi - kDefectStep);
    const double ddw = (w(x + kDefectStep).dw - w(x - kDefectStep).dw) / (2 * kDefectStep);
    const double defect = p * p * ddw + q(x) * retarded_w(spec, side, w, x) + lambda * w(x).w;
    worst = std::max(worst, std::abs(defect));
  }
  return worst;
}

void require_pair(const Trajectory& w1, const Trajectory& w2) {
  if (w1.side() != Side::Left || w2.side() != Side::Right) {
    throw std::invalid_argument("expected a left and a right trajectory");
  }
  if (w1.lambda() != w2.lambda()) throw std::invalid_argument("trajectories differ in lambda");
}

template <class F>
double sup_on_grid(const Trajectory& w, int grid, F value) {
  const double lo = w.lower();
  const double h = (w.upper() - lo) / grid;
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    worst = std::max(worst, std::abs(value(w(i == grid ? w.upper() : lo + i * h))));
  }
  return worst;
}

}  // namespace

ResidualReport residual(const ProblemSpec& spec, double lambda, const Trajectory& w1,
                        const Trajectory& w2, int grid) {
  require_pair(w1, w2);
  if (w1.lambda() != lambda) throw std::invalid_argument("trajectories were computed at another lambda");
  if (grid < 2) throw std::invalid_argument("residual grid needs at least 2 intervals");
  ResidualReport out;
  out.grid_size = grid;
  const State left_init{spec.a2, -spec.a1};
  const State right_init = transmit(spec, w1(kHalfPi));
  out.sup_integral_defect =
      std::max(integral_defect(spec, Side::Left, lambda, w1, left_init, grid),
               integral_defect(spec, Side::Right, lambda, w2, right_init, grid));
  out.sup_ode_defect = std::max(ode_defect(spec, Side::Left, lambda, w1, grid),
                                ode_defect(spec, Side::Right, lambda, w2, grid));
  return out;
}

TransmissionResidual transmission_residual(const ProblemSpec& spec, const Trajectory& w1,
                                           const Trajectory& w2) {
  require_pair(w1, w2);
  const State l = w1(kHalfPi);
  const State r = w2(kHalfPi);
  TransmissionResidual out;
  out.value = std::abs(spec.gamma1 * l.w - spec.delta1 * r.w);
  out.derivative = std::abs(spec.gamma2 * l.dw - spec.delta2 * r.dw);
  out.scale = std::max({1.0, std::abs(spec.gamma1 * l.w), std::abs(spec.delta1 * r.w),
                        std::abs(spec.gamma2 * l.dw), std::abs(spec.delta2 * r.dw)});
  return out;
}

double AmplitudeBounds::slack() const {
  return std::min({w1_bound - w1_sup, dw1_scaled_bound - dw1_scaled_sup, w2_bound - w2_sup});
}

AmplitudeBounds amplitude_bounds(const ProblemSpec& spec, const QNorms& norms,
                                 const Trajectory& w1, const Trajectory& w2, int grid) {
  require_pair(w1, w2);
  AmplitudeBounds out;
  const double lambda = w1.lambda();
  const double s = std::sqrt(lambda);
  out.w1_sup = sup_on_grid(w1, grid, [](State st) { return st.w; });
  out.dw1_scaled_sup = sup_on_grid(w1, grid, [](State st) { return st.dw; }) / s;
  out.w2_sup = sup_on_grid(w2, grid, [](State st) { return st.w; });
  if (norms.q1 <= 0.0 || lambda < norms.bound_lambda()) return out;

  out.applicable = true;
  const double q1 = norms.q1;
  const double k = std::sqrt(4 * q1 * q1 * spec.a2 * spec.a2 + spec.p1 * spec.p1 * spec.a1 * spec.a1);
  out.w1_bound = k / q1;
  out.dw1_scaled_bound = k / (spec.p1 * q1);
  out.w2_bound = 2.0 / q1 * k *
                 (std::abs(spec.gamma1 / spec.delta1) +
                  std::abs(spec.p2 * spec.gamma2 / (spec.p1 * spec.delta2)));
  return out;
}

}  // namespace rsl
