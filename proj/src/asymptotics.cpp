#include "rsl/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsl/errors.hpp"
#include "rsl/quadrature.hpp"

namespace rsl {

namespace {

constexpr double kQuadTol = 1e-10;

double half_integral(const CoefficientExpr& q, const CoefficientExpr& delay, double p, double s,
                     double a, double b, bool use_sin) {
  if (a == b) return 0.0;
  const double k = s / p;
  auto f = [&](double t) {
    const double arg = k * delay(t);
    return q(t) * (use_sin ? std::sin(arg) : std::cos(arg));
  };
  return 0.5 * integrate(f, a, b, kQuadTol, oscillation_panel_cap(p, s));
}

// Bracket of the refined eigenvalue formula with coefficient b_coef in front of B(pi/2).
double correction_bracket(const ProblemSpec& spec, const QuadTerms& t, double b_coef) {
  return spec.d / spec.p2 * t.D + spec.d * spec.a1 * spec.p1 / spec.a2 + 1.0 / spec.p2 +
         b_coef * t.B;
}

void require_a2(const ProblemSpec& spec) {
  if (spec.a2 == 0.0) throw UnavailableError("eigenfunction asymptotics need a2 != 0");
}

void require_x(double x) {
  if (!(x >= 0.0 && x <= kPi)) throw std::invalid_argument("x must lie in [0, pi]");
}

void require_x(double x, Side side) {
  if (!(x >= side_lo(side) && x <= side_hi(side))) {
    throw std::invalid_argument(std::string("x lies outside the ") + side_name(side) + " subinterval");
  }
}

// sup over x of |int_lo^x q cos|sin(s (2t - Delta)/p)| for one side, both variants.
std::array<double, 2> decay_side(const ProblemSpec& spec, Side side, double s) {
  const double lo = side_lo(side);
  const double hi = side_hi(side);
  const double p = spec.p(side);
  const CoefficientExpr& q = spec.q(side);
  const CoefficientExpr& delay = spec.delay(side);
  const int cells = std::max(64, static_cast<int>(std::ceil((hi - lo) / oscillation_panel_cap(p, s))));
  const double h = (hi - lo) / cells;
  double c = 0.0, sn = 0.0, c_sup = 0.0, s_sup = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = lo + i * h;
    const double b = i + 1 == cells ? hi : a + h;
    c += integrate([&](double t) { return q(t) * std::cos(s * (2 * t - delay(t)) / p); }, a, b, kQuadTol);
    sn += integrate([&](double t) { return q(t) * std::sin(s * (2 * t - delay(t)) / p); }, a, b, kQuadTol);
    c_sup = std::max(c_sup, std::abs(c));
    s_sup = std::max(s_sup, std::abs(sn));
  }
  return {c_sup, s_sup};
}

}  // namespace

double leading_s(const ProblemSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double unit = spec.p1 * spec.p2 / (spec.p1 + spec.p2);
  return spec.a2 != 0.0 ? unit * (2 * n + 1) : unit * 2 * n;
}

QuadTerms quad_terms(const ProblemSpec& spec, double x, double s) {
  require_x(x);
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  QuadTerms t;
  t.x = x;
  t.s = s;
  const double xl = std::min(x, kHalfPi);
  const double xr = std::max(x, kHalfPi);
  t.A = half_integral(spec.q_left, spec.delta_left, spec.p1, s, 0.0, xl, true);
  t.B = half_integral(spec.q_left, spec.delta_left, spec.p1, s, 0.0, xl, false);
  t.C = half_integral(spec.q_right, spec.delta_right, spec.p2, s, kHalfPi, xr, true);
  t.D = half_integral(spec.q_right, spec.delta_right, spec.p2, s, kHalfPi, xr, false);
  return t;
}

std::string refined_unavailable_reason(const ProblemSpec& spec) {
  if (spec.a2 == 0.0) return "a2 = 0";
  const RefinedConditionsReport& c = spec.conditions;
  if (!c.delay_ok) return "delay conditions fail";
  if (!c.condition_a_ok) return "condition a fails";
  if (!c.condition_b_ok) return "condition b fails";
  return {};
}

AsymptoticPrediction refined_s(const ProblemSpec& spec, int n) {
  if (const std::string reason = refined_unavailable_reason(spec); !reason.empty()) {
    throw UnavailableError("refined eigenvalue formula unavailable: " + reason);
  }
  AsymptoticPrediction out;
  out.n = n;
  out.s_leading = leading_s(spec, n);
  const QuadTerms mid = quad_terms(spec, kHalfPi, out.s_leading);
  const QuadTerms end = quad_terms(spec, kPi, out.s_leading);
  out.terms = {kHalfPi, out.s_leading, mid.A, mid.B, end.C, end.D};
  const double bracket = correction_bracket(spec, out.terms, spec.d / spec.p1);
  out.delta_n = -2.0 / (kPi * (2 * n + 1)) * bracket;
  out.s_refined = out.s_leading + *out.delta_n;
  return out;
}

AsymptoticPrediction predict(const ProblemSpec& spec, int n) {
  if (refined_unavailable_reason(spec).empty()) return refined_s(spec, n);
  AsymptoticPrediction out;
  out.n = n;
  out.s_leading = leading_s(spec, n);
  const QuadTerms mid = quad_terms(spec, kHalfPi, out.s_leading);
  const QuadTerms end = quad_terms(spec, kPi, out.s_leading);
  out.terms = {kHalfPi, out.s_leading, mid.A, mid.B, end.C, end.D};
  out.unavailable_reason = refined_unavailable_reason(spec);
  return out;
}

double DecayRow::max() const { return *std::max_element(scaled.begin(), scaled.end()); }

DecayReport oscillatory_decay(const ProblemSpec& spec, const std::vector<double>& s_list) {
  if (!spec.conditions.condition_a_ok || !spec.conditions.condition_b_ok) {
    throw UnavailableError("oscillatory decay needs conditions a and b");
  }
  DecayReport out;
  for (double s : s_list) {
    if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
    const auto left = decay_side(spec, Side::Left, s);
    const auto right = decay_side(spec, Side::Right, s);
    DecayRow row;
    row.s = s;
    row.scaled = {s * left[0], s * left[1], s * right[0], s * right[1]};
    out.max_scaled = std::max(out.max_scaled, row.max());
    out.rows.push_back(row);
  }
  return out;
}

double leading_eigenfunction(const ProblemSpec& spec, int n, double x) {
  return leading_eigenfunction(spec, n, x, x <= kHalfPi ? Side::Left : Side::Right);
}

double leading_eigenfunction(const ProblemSpec& spec, int n, double x, Side side) {
  require_a2(spec);
  require_x(x, side);
  const double s = leading_s(spec, n);
  if (side == Side::Left) return spec.a2 * std::cos(s * x / spec.p1);
  const double kappa = x / spec.p2 + kPi * (spec.p2 - spec.p1) / (2 * spec.p1 * spec.p2);
  return spec.gamma1 * spec.a2 / spec.delta1 * std::cos(s * kappa);
}

RefinedEigenfunction::RefinedEigenfunction(const ProblemSpec& spec, int n,
                                           const AsymptoticOptions& options)
    : spec_(&spec), n_(n) {
  const AsymptoticPrediction pred = refined_s(spec, n);
  s_ = pred.s_leading;
  mid_ = quad_terms(spec, kHalfPi, s_);
  bracket_ = correction_bracket(spec, pred.terms, spec.d / spec.p1);
  const double b_coef = options.eigenfunction_b == BReading::OverP1 ? spec.d / spec.p1 : spec.d;
  bracket_left_ = correction_bracket(spec, pred.terms, b_coef);
}

double RefinedEigenfunction::operator()(double x) const {
  return (*this)(x, x <= kHalfPi ? Side::Left : Side::Right);
}

double RefinedEigenfunction::operator()(double x, Side side) const {
  require_x(x, side);
  const ProblemSpec& sp = *spec_;
  const double s = s_;
  const double m = 2.0 / (kPi * (2 * n_ + 1));
  if (side == Side::Left) {
    const QuadTerms t = quad_terms(sp, x, s);
    const double arg = s * x / sp.p1;
    return sp.a2 * std::cos(arg) * (1.0 + t.A / (s * sp.p1)) +
           sp.a2 * std::sin(arg) * (m * x / sp.p1) * bracket_left_ -
           std::sin(arg) / s * (sp.a1 * sp.p1 + sp.a2 / sp.p1 * t.B);
  }
  const QuadTerms t = quad_terms(sp, x, s);
  const double kappa = x / sp.p2 + kPi * (sp.p2 - sp.p1) / (2 * sp.p1 * sp.p2);
  const double psi = s * kappa;
  const double g = sp.gamma1 / sp.delta1;
  const double cos_part = g * sp.a2 * (1.0 + mid_.A / (s * sp.p1)) + g * sp.a2 * t.C / (s * sp.p2);
  const double sin_part = g * sp.a2 * m * bracket_ * kappa - g * sp.a2 * t.D / (s * sp.p2) -
                          g / s * (sp.a1 * sp.p1 + sp.a2 * mid_.B / sp.p1);
  return cos_part * std::cos(psi) + sin_part * std::sin(psi);
}

double refined_eigenfunction(const ProblemSpec& spec, int n, double x,
                             const AsymptoticOptions& options) {
  return RefinedEigenfunction(spec, n, options)(x);
}

}  // namespace rsl
