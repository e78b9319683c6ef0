#include "rsl/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rsl/errors.hpp"

namespace rsl {

namespace {

constexpr const char* kNumberKeys[] = {"p1", "p2", "gamma1", "gamma2", "delta1",
                                       "delta2", "a1", "a2", "d"};
constexpr const char* kExprKeys[] = {"q_left", "q_right", "delta_left", "delta_right"};

// Grid inequalities tolerate this much rounding in x - Delta(x).
constexpr double kGridSlack = 1e-12;

double number_field(const nlohmann::json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end()) throw ConfigError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("field '") + key + "' is not finite");
  return v;
}

CoefficientExpr expr_field(const nlohmann::json& config, const char* key) {
  auto it = config.find(key);
  if (it == config.end()) throw ConfigError(std::string("missing field '") + key + "'");
  if (!it->is_string()) {
    throw ConfigError(std::string("field '") + key + "' must be an expression string");
  }
  try {
    return parse_expression(it->get<std::string>());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

double grid_x(Side side, int i, int n) {
  const double h = kHalfPi / n;
  return i == n ? side_hi(side) : side_lo(side) + i * h;
}

struct DerivativeMaxima {
  double slope_max = -INFINITY;  // max of f'
  double abs_first = 0.0;        // max |f'|
  double abs_second = 0.0;       // max |f''|
};

// Central differences on the interior of a uniform grid with n cells.
DerivativeMaxima derivative_maxima(const CoefficientExpr& f, Side side, int n) {
  const double h = kHalfPi / n;
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = f(grid_x(side, i, n));
  DerivativeMaxima m;
  for (int i = 1; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double d1 = (v[k + 1] - v[k - 1]) / (2 * h);
    const double d2 = (v[k + 1] - 2 * v[k] + v[k - 1]) / (h * h);
    m.slope_max = std::max(m.slope_max, d1);
    m.abs_first = std::max(m.abs_first, std::abs(d1));
    m.abs_second = std::max(m.abs_second, std::abs(d2));
  }
  // One-sided slopes at the ends so a steep edge is not missed.
  m.slope_max = std::max({m.slope_max, (v[1] - v[0]) / h,
                          (v[static_cast<std::size_t>(n)] - v[static_cast<std::size_t>(n) - 1]) / h});
  return m;
}

bool stays_bounded(double coarse, double fine) {
  return std::isfinite(coarse) && std::isfinite(fine) && fine <= 1.25 * coarse + 1e-6;
}

}  // namespace

RefinedConditionsReport validate_delay(const ProblemSpec& spec, int grid_points) {
  if (grid_points < 16) throw std::invalid_argument("validate_delay: grid_points must be >= 16");

  RefinedConditionsReport r;
  r.grid_size = grid_points;
  r.delay_ok = true;
  r.condition_a_ok = true;
  r.condition_b_ok = true;

  auto violate = [&r](bool& flag, double magnitude, std::string what) {
    flag = false;
    r.worst_violation = std::max(r.worst_violation, magnitude);
    r.violations.push_back(std::move(what));
  };

  for (Side side : {Side::Left, Side::Right}) {
    const auto& delay = spec.delay(side);
    const double floor = side == Side::Left ? 0.0 : kHalfPi;
    double worst_neg = 0.0;
    double worst_reach = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
      const double x = grid_x(side, i, grid_points);
      const double dl = delay(x);
      spec.q(side)(x);  // q must be finite on the grid as well
      worst_neg = std::max(worst_neg, -dl);
      worst_reach = std::max(worst_reach, floor - (x - dl));
    }
    if (worst_neg > kGridSlack) {
      violate(r.delay_ok, worst_neg,
              std::string("delay_") + side_name(side) + " is negative (retarded argument required)");
    }
    if (worst_reach > kGridSlack) {
      violate(r.delay_ok, worst_reach,
              side == Side::Left ? "x - delta_left(x) < 0 on [0, pi/2)"
                                 : "x - delta_right(x) < pi/2 on (pi/2, pi]");
    }

    const DerivativeMaxima coarse_d = derivative_maxima(delay, side, grid_points);
    const DerivativeMaxima fine_d = derivative_maxima(delay, side, 2 * grid_points);
    if (coarse_d.slope_max > 1.0 + 1e-8) {
      violate(r.condition_b_ok, coarse_d.slope_max - 1.0,
              std::string("delay_") + side_name(side) + "' exceeds 1");
    }
    if (!stays_bounded(coarse_d.abs_second, fine_d.abs_second)) {
      violate(r.condition_a_ok, fine_d.abs_second - coarse_d.abs_second,
              std::string("delay_") + side_name(side) + "'' is not bounded");
    }
    const DerivativeMaxima coarse_q = derivative_maxima(spec.q(side), side, grid_points);
    const DerivativeMaxima fine_q = derivative_maxima(spec.q(side), side, 2 * grid_points);
    if (!stays_bounded(coarse_q.abs_first, fine_q.abs_first)) {
      violate(r.condition_a_ok, fine_q.abs_first - coarse_q.abs_first,
              std::string("q_") + side_name(side) + "' is not bounded");
    }
  }

  const double at_zero = std::abs(spec.delta_left(0.0));
  if (at_zero > 1e-10) violate(r.condition_b_ok, at_zero, "delta_left(0) != 0");
  const double at_seam = std::abs(spec.delta_right(kHalfPi));
  if (at_seam > 1e-10) violate(r.condition_b_ok, at_seam, "delta_right(pi/2+) != 0");
  return r;
}

ProblemSpec load_problem(const nlohmann::json& config, const LoadOptions& options) {
  if (!config.is_object()) throw ConfigError("problem config must be a JSON object");
  for (const char* key : kNumberKeys) number_field(config, key);
  for (const char* key : kExprKeys) expr_field(config, key);

  ProblemSpec spec;
  spec.p1 = number_field(config, "p1");
  spec.p2 = number_field(config, "p2");
  spec.gamma1 = number_field(config, "gamma1");
  spec.gamma2 = number_field(config, "gamma2");
  spec.delta1 = number_field(config, "delta1");
  spec.delta2 = number_field(config, "delta2");
  spec.a1 = number_field(config, "a1");
  spec.a2 = number_field(config, "a2");
  spec.d = number_field(config, "d");
  spec.q_left = expr_field(config, "q_left");
  spec.q_right = expr_field(config, "q_right");
  spec.delta_left = expr_field(config, "delta_left");
  spec.delta_right = expr_field(config, "delta_right");

  if (spec.p1 <= 0.0 || spec.p2 <= 0.0) throw ConfigError("p1 and p2 must be positive");
  if (std::abs(spec.a1) + std::abs(spec.a2) == 0.0) throw ConfigError("|a1|+|a2| = 0");
  if (std::abs(spec.gamma1) + std::abs(spec.delta1) == 0.0) {
    throw ConfigError("|gamma1|+|delta1| = 0");
  }
  if (std::abs(spec.gamma2) + std::abs(spec.delta2) == 0.0) {
    throw ConfigError("|gamma2|+|delta2| = 0");
  }
  for (auto [value, name] : {std::pair{spec.gamma1, "gamma1"}, std::pair{spec.gamma2, "gamma2"},
                             std::pair{spec.delta1, "delta1"}, std::pair{spec.delta2, "delta2"}}) {
    if (value == 0.0) throw ConfigError(std::string(name) + " must be nonzero");
  }
  const double lhs = spec.gamma1 * spec.delta2 * spec.p1;
  const double rhs = spec.gamma2 * spec.delta1 * spec.p2;
  if (std::abs(lhs - rhs) > kConstraintRelTol * std::max(std::abs(lhs), std::abs(rhs))) {
    std::ostringstream msg;
    msg << "gamma1*delta2*p1 != gamma2*delta1*p2 (" << lhs << " vs " << rhs << ")";
    throw ConfigError(msg.str());
  }

  try {
    spec.conditions = validate_delay(spec, std::max(16, options.grid_points));
  } catch (const EvalError& e) {
    throw ConfigError(std::string("coefficient cannot be evaluated on the grid: ") + e.what());
  }
  if (options.check_delay && !spec.conditions.delay_ok) {
    std::string msg = "delay condition violated:";
    for (const auto& v : spec.conditions.violations) msg += " " + v + ";";
    throw ConfigError(msg);
  }
  return spec;
}

ProblemSpec load_problem_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return load_problem(doc, options);
}

nlohmann::json to_json(const ProblemSpec& spec) {
  return nlohmann::json{
      {"p1", spec.p1},
      {"p2", spec.p2},
      {"gamma1", spec.gamma1},
      {"gamma2", spec.gamma2},
      {"delta1", spec.delta1},
      {"delta2", spec.delta2},
      {"a1", spec.a1},
      {"a2", spec.a2},
      {"d", spec.d},
      {"q_left", spec.q_left.to_string()},
      {"q_right", spec.q_right.to_string()},
      {"delta_left", spec.delta_left.to_string()},
      {"delta_right", spec.delta_right.to_string()},
  };
}

}  // namespace rsl
