#include "rsl/picard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rsl/errors.hpp"
#include "rsl/integrator.hpp"

namespace rsl {

namespace {

struct Stencil {
  std::size_t first = 0;
  std::array<double, 4> weight{};
};

// Four-point Lagrange weights for r on a uniform grid lo + i h, i = 0..n.
Stencil lagrange_stencil(double r, double lo, double h, std::size_t n) {
  const double t = (r - lo) / h;
  auto j = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 3);
  Stencil st;
  st.first = static_cast<std::size_t>(j);
  const double u = t - static_cast<double>(j);  // position relative to node j, in cells
  for (int a = 0; a < 4; ++a) {
    double num = 1.0, den = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      num *= u - b;
      den *= a - b;
    }
    st.weight[a] = num / den;
  }
  return st;
}

struct SideResult {
  Trajectory traj;
  int iterations = 0;
};

SideResult iterate_side(const ProblemSpec& spec, Side side, double lambda, State initial,
                        int max_iters, double tol, int grid_points,
                        std::vector<double>& ratios) {
  const double lo = side_lo(side);
  const double hi = side_hi(side);
  const auto n = static_cast<std::size_t>(grid_points);
  const double h = (hi - lo) / static_cast<double>(n);
  const double p = spec.p(side);
  const double s = std::sqrt(lambda);
  const double omega = s / p;

  std::vector<double> x(n + 1), cs(n + 1), sn(n + 1), qv(n + 1), base(n + 1), dbase(n + 1);
  std::vector<Stencil> stencil(n + 1);
  const CoefficientExpr& q = spec.q(side);
  const CoefficientExpr& delay = spec.delay(side);
  for (std::size_t i = 0; i <= n; ++i) {
    x[i] = i == n ? hi : lo + static_cast<double>(i) * h;
    cs[i] = std::cos(omega * x[i]);
    sn[i] = std::sin(omega * x[i]);
    qv[i] = q(x[i]);
    const double c0 = std::cos(omega * (x[i] - lo));
    const double s0 = std::sin(omega * (x[i] - lo));
    base[i] = initial.w * c0 + initial.dw / omega * s0;
    dbase[i] = -initial.w * omega * s0 + initial.dw * c0;
    const double r = x[i] - delay(x[i]);
    if (r > x[i] + 1e-12 || r < lo - 1e-12) {
      throw IntegrationError(std::string("retarded argument outside the ") + side_name(side) +
                             " subinterval at x = " + std::to_string(x[i]));
    }
    stencil[i] = lagrange_stencil(std::clamp(r, lo, hi), lo, h, n);
  }

  std::vector<double> u = base, du = dbase, g(n + 1);
  double prev_diff = 0.0;
  double ratio = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i <= n; ++i) {
      const Stencil& st = stencil[i];
      double ur = 0.0;
      for (int a = 0; a < 4; ++a) ur += st.weight[a] * u[st.first + a];
      g[i] = qv[i] * ur;
    }
    double c_sum = 0.0, s_sum = 0.0, diff = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i > 0) {
        c_sum += 0.5 * h * (g[i - 1] * cs[i - 1] + g[i] * cs[i]);
        s_sum += 0.5 * h * (g[i - 1] * sn[i - 1] + g[i] * sn[i]);
      }
      const double u_new = base[i] - (sn[i] * c_sum - cs[i] * s_sum) / (s * p);
      du[i] = dbase[i] - (cs[i] * c_sum + sn[i] * s_sum) / (p * p);
      diff = std::max(diff, std::abs(u_new - u[i]));
      u[i] = u_new;
    }
    if (it > 1 && prev_diff > 0.0) {
      ratio = diff / prev_diff;
      ratios.push_back(ratio);
    }
    prev_diff = diff;
    if (diff < tol) {
      return {Trajectory::from_hermite(side, lambda, std::move(x), u, du), it};
    }
  }
  throw ConvergenceError(ratio, std::string("picard iteration on the ") + side_name(side) +
                                    " subinterval did not converge in " +
                                    std::to_string(max_iters) + " iterations");
}

}  // namespace

PicardResult picard_solve(const ProblemSpec& spec, double lambda, int max_iters, double tol,
                          int grid_points) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  if (grid_points < 4) throw std::invalid_argument("picard grid needs at least 4 intervals");

  PicardResult out;
  SideResult left = iterate_side(spec, Side::Left, lambda, State{spec.a2, -spec.a1}, max_iters,
                                 tol, grid_points, out.ratios);
  SideResult right = iterate_side(spec, Side::Right, lambda, transmit(spec, left.traj(kHalfPi)),
                                  max_iters, tol, grid_points, out.ratios);
  out.w1 = std::move(left.traj);
  out.w2 = std::move(right.traj);
  out.iterations = left.iterations + right.iterations;
  return out;
}

}  // namespace rsl
