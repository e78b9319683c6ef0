#pragma once

// Test-side reference computations. Nothing here calls into the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;

template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  if ((flo > 0) == (f(hi) > 0)) throw std::domain_error("bisect: no sign change");
  while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// n-th positive root of tan(s pi) = s, which lies in (n, n + 1/2).
inline double tan_root(int n) {
  auto g = [](double s) { return std::sin(s * kPi) - s * std::cos(s * kPi); };
  return bisect(g, n + 1e-12, n + 0.5);
}

// Undelayed problem with constant q on each side.
struct Constant {
  double p1 = 1, p2 = 1, g1 = 1, g2 = 1, d1 = 1, d2 = 1, a1 = 0, a2 = 1, d = 0;
  double q_left = 0, q_right = 0;

  struct Value {
    double w, dw;
  };

  Value w1(double lambda, double x) const {
    const double k = std::sqrt(lambda + q_left) / p1;
    return {a2 * std::cos(k * x) - a1 / k * std::sin(k * x),
            -a2 * k * std::sin(k * x) - a1 * std::cos(k * x)};
  }

  Value w2(double lambda, double x) const {
    const Value mid = w1(lambda, kHalfPi);
    const double A = g1 / d1 * mid.w;
    const double B = g2 / d2 * mid.dw;
    const double k = std::sqrt(lambda + q_right) / p2;
    const double t = x - kHalfPi;
    return {A * std::cos(k * t) + B / k * std::sin(k * t), -A * k * std::sin(k * t) + B * std::cos(k * t)};
  }

  double characteristic(double lambda) const {
    const Value end = w2(lambda, kPi);
    return end.dw + d * lambda * end.w;
  }

  // Root of F(s^2)/s inside [lo, hi].
  double root(double lo, double hi) const {
    return bisect([&](double s) { return characteristic(s * s) / s; }, lo, hi);
  }
};

// Fixed-step classical RK4 with the method of steps; retarded values come from cubic Hermite
// interpolation of stored nodes, or a first-order Taylor step from the newest node when the
// retarded point has not been reached yet. Accurate only when the delay exceeds a step
// away from the left end.
struct Delayed {
  using Fn = std::function<double(double)>;
  double p = 1;
  Fn q, delay;
  double lo = 0, hi = kHalfPi;
  int steps = 20000;

  std::vector<double> x, w, dw;

  double retarded(double t) const {
    if (t <= x.front()) return w.front();
    if (t >= x.back()) return w.back() + dw.back() * (t - x.back());
    const double h = x[1] - x[0];
    std::size_t k = static_cast<std::size_t>((t - x.front()) / h);
    k = std::min(k, x.size() - 2);
    const double th = (t - x[k]) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
    return h00 * w[k] + h10 * h * dw[k] + h01 * w[k + 1] + h11 * h * dw[k + 1];
  }

  void run(double lambda, double w0, double dw0) {
    x = {lo};
    w = {w0};
    dw = {dw0};
    const double h = (hi - lo) / steps;
    auto acc = [&](double t, double y) { return -(lambda * y + q(t) * retarded(t - delay(t))) / (p * p); };
    for (int i = 0; i < steps; ++i) {
      const double t = x.back(), y = w.back(), v = dw.back();
      const double k1y = v, k1v = acc(t, y);
      const double k2y = v + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, y + 0.5 * h * k1y);
      const double k3y = v + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, y + 0.5 * h * k2y);
      const double k4y = v + h * k3v, k4v = acc(t + h, y + h * k3y);
      w.push_back(y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y));
      dw.push_back(v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v));
      x.push_back(i + 1 == steps ? hi : lo + (i + 1) * h);
    }
  }
};

}  // namespace oracle
