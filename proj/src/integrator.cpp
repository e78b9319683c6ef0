#include "rsl/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rsl/errors.hpp"

namespace rsl {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension of order 4 (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI step-size control constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

constexpr int kMaxInStepIterations = 8;
constexpr std::size_t kMaxSteps = 2'000'000;

State operator+(State a, State b) { return {a.w + b.w, a.dw + b.dw}; }
State operator*(double c, State a) { return {c * a.w, c * a.dw}; }

std::array<double, 5> monomial(double r1, double r2, double r3, double r4, double r5) {
  return {r1, r2 + r3, r4 + r5 - r3, -2 * r5 - r4, r5};
}

class SegmentSolver {
 public:
  SegmentSolver(const ProblemSpec& spec, Side side, double lambda, State initial, double tol)
      : q_(spec.q(side)),
        delay_(spec.delay(side)),
        side_(side),
        lambda_(lambda),
        inv_p2_(1.0 / (spec.p(side) * spec.p(side))),
        omega_(std::sqrt(lambda) / spec.p(side)),
        lo_(side_lo(side)),
        hi_(side_hi(side)),
        h_max_(kPi * spec.p(side) / (8.0 * std::sqrt(lambda))),
        tol_(tol),
        y0_(initial) {
    amplitude_ = std::hypot(initial.w, initial.dw / omega_);
    if (amplitude_ == 0.0) amplitude_ = 1.0;
  }

  Trajectory run() {
    nodes_.push_back(lo_);
    const double length = hi_ - lo_;
    double x = lo_;
    State y = y0_;
    double h = std::min(h_max_, length) * 0.1;
    double fac_old = 1e-4;
    bool last_rejected = false;
    bool k1_valid = false;
    State k1{};

    while (x < hi_) {
      if (segments_.size() >= kMaxSteps) throw IntegrationError("too many integration steps");
      bool last = false;
      if (x + h >= hi_ - 1e-14 * length) {
        h = hi_ - x;
        last = true;
      }
      if (h < 1e-13 * length) {
        throw IntegrationError("step-size underflow at x = " + std::to_string(x));
      }

      if (!k1_valid) k1 = rhs(x, y, x, h);
      StepResult st = step(x, y, h, k1);

      const double sk_w = tol_ * (amplitude_ + std::max(std::abs(y.w), std::abs(st.y1.w)));
      const double sk_dw =
          tol_ * (amplitude_ * omega_ + std::max(std::abs(y.dw), std::abs(st.y1.dw)));
      const double err =
          std::sqrt(0.5 * (std::pow(st.err.w / sk_w, 2) + std::pow(st.err.dw / sk_dw, 2)));

      const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(fac_old, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        double h_new = h / fac;
        fac_old = std::max(err, 1e-4);

        nodes_.push_back(last ? hi_ : x + h);
        segments_.push_back(st.poly);
        x = nodes_.back();
        y = st.y1;
        k1 = st.k7;
        k1_valid = !st.used_in_step;
        if (last_rejected) h_new = std::min(h_new, h);
        last_rejected = false;
        h = std::min(h_new, h_max_);
      } else {
        h = h / std::min(1.0 / kFacMin, fac11 / kSafe);
        last_rejected = true;
        k1_valid = false;
      }
    }
    return Trajectory(side_, lambda_, std::move(nodes_), std::move(segments_));
  }

 private:
  struct StepResult {
    State y1;
    State err;
    State k7;
    Trajectory::Segment poly;
    bool used_in_step = false;
  };

  // Retarded w at r in the already-computed history (r <= start of current step).
  double history_w(double r) const {
    if (segments_.empty()) return y0_.w;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    k = std::min(k, segments_.size() - 1);
    const double theta = (r - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
    return eval_quartic(segments_[k].w, theta);
  }

  // Retarded w inside the step being computed.
  double in_step_w(double r, double x_n, double h) const {
    if (have_current_) return eval_quartic(current_.w, (r - x_n) / h);
    if (!segments_.empty()) {
      const std::size_t k = segments_.size() - 1;
      const double theta = (r - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
      return eval_quartic(segments_[k].w, theta);  // extrapolated first guess
    }
    return y0_.w + (r - lo_) * y0_.dw;
  }

  State rhs(double x, State y, double x_n, double h) {
    const double dl = delay_(x);
    const double slack = 1e-12 * std::max(1.0, std::abs(x));
    if (dl < -slack) {
      throw IntegrationError("delay lookahead: x - Delta(x) > x at x = " + std::to_string(x));
    }
    const double r = x - dl;
    if (r < lo_ - slack) {
      throw IntegrationError(std::string("retarded argument leaves the ") + side_name(side_) +
                             " subinterval at x = " + std::to_string(x));
    }
    double wr;
    if (dl <= 0.0) {
      wr = y.w;
    } else if (r <= x_n) {
      wr = history_w(std::max(r, lo_));
    } else {
      wr = in_step_w(r, x_n, h);
      used_in_step_ = true;
    }
    return {y.dw, -(lambda_ * y.w + q_(x) * wr) * inv_p2_};
  }

  StepResult step(double x, State y, double h, State k1) {
    StepResult out;
    have_current_ = false;
    State prev_y1{};
    for (int iter = 0; iter < kMaxInStepIterations; ++iter) {
      used_in_step_ = false;
      const State k2 = rhs(x + c2 * h, y + (h * a21) * k1, x, h);
      const State k3 = rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2), x, h);
      const State k4 = rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), x, h);
      const State k5 =
          rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), x, h);
      const State k6 =
          rhs(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), x, h);
      const State y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      const State k7 = rhs(x + h, y1, x, h);

      out.y1 = y1;
      out.k7 = k7;
      out.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const State dense = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      const State r2 = y1 + (-1.0) * y;
      const State r3 = h * k1 + (-1.0) * r2;
      const State r4 = r2 + (-h) * k7 + (-1.0) * r3;
      out.poly.w = monomial(y.w, r2.w, r3.w, r4.w, dense.w);
      out.poly.dw = monomial(y.dw, r2.dw, r3.dw, r4.dw, dense.dw);
      out.used_in_step = out.used_in_step || used_in_step_;

      if (!used_in_step_) break;
      const double change = std::abs(y1.w - prev_y1.w) + std::abs(y1.dw - prev_y1.dw) / omega_;
      current_ = out.poly;
      have_current_ = true;
      if (iter > 0 && change <= 1e-3 * tol_ * amplitude_) break;
      prev_y1 = y1;
    }
    have_current_ = false;
    return out;
  }

  const CoefficientExpr& q_;
  const CoefficientExpr& delay_;
  Side side_;
  double lambda_;
  double inv_p2_;
  double omega_;
  double lo_;
  double hi_;
  double h_max_;
  double tol_;
  State y0_;
  double amplitude_ = 1.0;

  std::vector<double> nodes_;
  std::vector<Trajectory::Segment> segments_;
  Trajectory::Segment current_{};
  bool have_current_ = false;
  bool used_in_step_ = false;
};

void check_args(double lambda, double tol) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (!(tol >= 1e-13 && tol <= 1e-3)) throw std::invalid_argument("tol must lie in [1e-13, 1e-3]");
}

}  // namespace

Trajectory solve_segment(const ProblemSpec& spec, Side side, double lambda, State initial,
                         double tol) {
  check_args(lambda, tol);
  SegmentSolver solver(spec, side, lambda, initial, tol);
  return solver.run();
}

Trajectory solve_w1(const ProblemSpec& spec, double lambda, double tol) {
  return solve_segment(spec, Side::Left, lambda, State{spec.a2, -spec.a1}, tol);
}

State transmit(const ProblemSpec& spec, State w1_end) {
  return {spec.gamma1 / spec.delta1 * w1_end.w, spec.gamma2 / spec.delta2 * w1_end.dw};
}

Trajectory solve_w2(const ProblemSpec& spec, double lambda, const Trajectory& w1, double tol) {
  if (w1.side() != Side::Left || w1.upper() != kHalfPi) {
    throw std::invalid_argument("solve_w2 needs a left trajectory covering [0, pi/2]");
  }
  if (w1.lambda() != lambda) {
    throw std::invalid_argument("solve_w2: lambda does not match the w1 trajectory");
  }
  return solve_segment(spec, Side::Right, lambda, transmit(spec, w1(kHalfPi)), tol);
}

Solution solve(const ProblemSpec& spec, double lambda, double tol) {
  Trajectory w1 = solve_w1(spec, lambda, tol);
  Trajectory w2 = solve_w2(spec, lambda, w1, tol);
  return {std::move(w1), std::move(w2)};
}

}  // namespace rsl
