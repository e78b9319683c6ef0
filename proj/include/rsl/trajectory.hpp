#pragma once

#include <array>
#include <span>
#include <vector>

#include "rsl/constants.hpp"

namespace rsl {

struct State {
  double w = 0.0;
  double dw = 0.0;
};

/// Dense piecewise-polynomial solution (w, w') on one subinterval at fixed lambda.
///
/// Each step [x_k, x_{k+1}] carries quartic polynomials in theta = (x - x_k)/h_k
/// for w and for w'. Both match the step endpoint values exactly, so w and w'
/// are continuous across mesh nodes.
class Trajectory {
 public:
  struct Segment {
    std::array<double, 5> w{};   // monomial coefficients in theta
    std::array<double, 5> dw{};
  };

  Trajectory() = default;
  Trajectory(Side side, double lambda, std::vector<double> nodes, std::vector<Segment> segments);

  /// Cubic Hermite interpolant through nodal (w, w'); w' is the exact
  /// derivative of the w polynomial.
  static Trajectory from_hermite(Side side, double lambda, std::vector<double> nodes,
                                 std::span<const double> w, std::span<const double> dw);

  /// Throws IntegrationError for x outside [lower(), upper()].
  State operator()(double x) const;

  double lower() const { return nodes_.front(); }
  double upper() const { return nodes_.back(); }
  double lambda() const { return lambda_; }
  Side side() const { return side_; }
  std::size_t steps() const { return segments_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const Segment> segments() const { return segments_; }

  /// State at the left end of step k (exact node value).
  State node_state(std::size_t k) const;

  /// Same trajectory with w and w' multiplied by c.
  Trajectory scaled(double c) const;

 private:
  Side side_ = Side::Left;
  double lambda_ = 0.0;
  std::vector<double> nodes_{0.0, 0.0};
  std::vector<Segment> segments_{Segment{}};
};

/// Horner evaluation of a quartic in theta.
constexpr double eval_quartic(const std::array<double, 5>& c, double theta) {
  return c[0] + theta * (c[1] + theta * (c[2] + theta * (c[3] + theta * c[4])));
}

}  // namespace rsl
