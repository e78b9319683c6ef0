#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "rsl/constants.hpp"
#include "rsl/expression.hpp"

namespace rsl {

/// Outcome of the grid checks on the delay and on the smoothness conditions
/// needed by the refined asymptotics.
struct RefinedConditionsReport {
  /// q' and Delta'' stay bounded under grid refinement on both subintervals.
  bool condition_a_ok = false;
  /// Delta' <= 1, Delta(0) = 0 and Delta(pi/2+) = 0.
  bool condition_b_ok = false;
  /// Delta >= 0, x - Delta >= 0 on the left and x - Delta >= pi/2 on the right.
  bool delay_ok = false;
  int grid_size = 0;
  double worst_violation = 0.0;
  std::vector<std::string> violations;

  bool refined_available() const { return condition_a_ok && condition_b_ok && delay_ok; }
};

/// Problem  p(x) y'' + q(x) y(x - Delta(x)) + lambda y = 0  on [0, pi/2) u (pi/2, pi] with
///   a1 y(0) + a2 y'(0) = 0,   y'(pi) + d lambda y(pi) = 0,
///   gamma1 y(pi/2-) = delta1 y(pi/2+),   gamma2 y'(pi/2-) = delta2 y'(pi/2+),
/// where p = p1^2 on the left and p2^2 on the right.
struct ProblemSpec {
  double p1 = 1.0;
  double p2 = 1.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double a1 = 0.0;
  double a2 = 1.0;
  double d = 0.0;
  CoefficientExpr q_left;
  CoefficientExpr q_right;
  CoefficientExpr delta_left;
  CoefficientExpr delta_right;

  /// Filled in by load_problem with the default grid.
  RefinedConditionsReport conditions;

  double p(Side side) const { return side == Side::Left ? p1 : p2; }
  const CoefficientExpr& q(Side side) const { return side == Side::Left ? q_left : q_right; }
  const CoefficientExpr& delay(Side side) const {
    return side == Side::Left ? delta_left : delta_right;
  }
};

struct LoadOptions {
  int grid_points = 4096;
  /// When false, delay violations are left for validate_delay to report.
  bool check_delay = true;
};

inline constexpr double kConstraintRelTol = 1e-12;

ProblemSpec load_problem(const nlohmann::json& config, const LoadOptions& options = {});
ProblemSpec load_problem_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Inverse of load_problem: constants verbatim, expressions as canonical text.
nlohmann::json to_json(const ProblemSpec& spec);

/// Grid check of the delay conditions and of conditions a.) / b.).
/// Finite differences use h = (pi/2) / grid_points; throws EvalError if an
/// expression cannot be evaluated on the grid.
RefinedConditionsReport validate_delay(const ProblemSpec& spec, int grid_points);

}  // namespace rsl
