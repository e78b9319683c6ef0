#include <cmath>
#include <random>

#include "doctest.h"

#include "rsl/errors.hpp"
#include "rsl/expression.hpp"
#include "rsl/problem.hpp"
#include "support.hpp"

using namespace rsl;

TEST_CASE("expression: precedence and associativity") {
  CHECK(parse_expression("1 + 2 * 3")(0) == 7.0);
  CHECK(parse_expression("2 ^ 3 ^ 2")(0) == 512.0);
  CHECK(parse_expression("-2 ^ 2")(0) == 4.0);  // unary minus binds tighter than ^
  CHECK(parse_expression("(1 - x) / 4")(3) == -0.5);
  CHECK(parse_expression("8 - 3 - 2")(0) == 3.0);
}

TEST_CASE("expression: functions and constants") {
  CHECK(parse_expression("sin(x)")(0.5) == std::sin(0.5));
  CHECK(parse_expression("cos(x) + exp(x)")(0.25) == std::cos(0.25) + std::exp(0.25));
  CHECK(parse_expression("abs(-x)")(2) == 2.0);
  CHECK(parse_expression("sqrt(x)")(9) == 3.0);
  CHECK(parse_expression("pi / 2")(0) == doctest::Approx(kHalfPi).epsilon(1e-16));
  CHECK(parse_expression("1e-3 * x")(2) == 2e-3);
}

TEST_CASE("expression: parse errors carry kind and offset") {
  auto kind_of = [](const char* text) {
    try {
      parse_expression(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("expected a parse error for " << text);
    return ParseError::Kind::Syntax;
  };
  CHECK(kind_of("") == ParseError::Kind::Syntax);
  CHECK(kind_of("1 +") == ParseError::Kind::Syntax);
  CHECK(kind_of("(x") == ParseError::Kind::Syntax);
  CHECK(kind_of("tan(x)") == ParseError::Kind::UnknownIdentifier);
  CHECK(kind_of("y + 1") == ParseError::Kind::UnknownIdentifier);
  CHECK(kind_of("sin()") == ParseError::Kind::Arity);
  CHECK(kind_of("sin(x, 1)") == ParseError::Kind::Arity);

  try {
    parse_expression("x + y");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("expression: domain failures raise EvalError") {
  CHECK_THROWS_AS(parse_expression("1 / x")(0), EvalError);
  CHECK_THROWS_AS(parse_expression("sqrt(x)")(-1), EvalError);
  CHECK_THROWS_AS(parse_expression("exp(x)")(1e4), EvalError);
  try {
    parse_expression("1 / (x - 1)")(1);
  } catch (const EvalError& e) {
    CHECK(e.x() == 1.0);
  }
}

TEST_CASE("expression: printed form parses back to the same tree") {
  std::mt19937 rng(17);
  const char* samples[] = {"x", "sin(x) * 2 - 1", "-(x ^ 2) / (1 + x)", "abs(cos(3 * x)) + exp(-x)",
                           "(x - pi / 2) / 2", "sqrt(1 + x * x) ^ 3"};
  std::uniform_real_distribution<double> ux(0.0, 3.0);
  for (const char* text : samples) {
    const CoefficientExpr e = parse_expression(text);
    const CoefficientExpr back = parse_expression(e.to_string());
    CHECK(e == back);
    for (int i = 0; i < 20; ++i) {
      const double x = ux(rng);
      CHECK(e(x) == back(x));
    }
  }
}

TEST_CASE("expression: constant detection") {
  CHECK(parse_expression("2 * pi")(0) == parse_expression("2 * pi")(1));
  CHECK(parse_expression("2 * pi").is_constant());
  CHECK_FALSE(parse_expression("0 * x").is_constant());
}

TEST_CASE("problem: shipped configs load") {
  for (const char* name : {"trivial", "trivial_d0", "canonical", "wide_left", "wide_left_undelayed"}) {
    CAPTURE(name);
    const ProblemSpec spec = testing::load(name);
    CHECK(spec.conditions.delay_ok);
  }
}

TEST_CASE("problem: invariants are enforced") {
  CHECK_THROWS_WITH_AS(testing::make({{"a1", 0}, {"a2", 0}}), "|a1|+|a2| = 0", ConfigError);
  CHECK_THROWS_AS(testing::make({{"p1", 0}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"p2", -1}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"gamma1", 0}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"p2", 2}}), ConfigError);  // gamma1 delta2 p1 != gamma2 delta1 p2
  CHECK_NOTHROW(testing::make({{"p2", 2}, {"gamma2", 0.5}}));
  CHECK_THROWS_AS(testing::make({{"q_left", "sin("}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"q_left", "sqrt(x - 1)"}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"d", "one"}}), ConfigError);

  CHECK_THROWS_AS(load_problem(nlohmann::json{{"p1", 1}}), ConfigError);
}

TEST_CASE("problem: constraint tolerance is relative") {
  const double p2 = 3.0 * (1 + 1e-13);
  CHECK_NOTHROW(testing::make({{"p2", p2}, {"gamma2", 1.0 / 3.0}}));
  CHECK_THROWS_AS(testing::make({{"p2", 3.0 * (1 + 1e-9)}, {"gamma2", 1.0 / 3.0}}), ConfigError);
}

TEST_CASE("problem: delay conditions") {
  CHECK_THROWS_AS(testing::make({{"delta_left", "2 * x"}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"delta_left", "-1"}}), ConfigError);
  CHECK_THROWS_AS(testing::make({{"delta_right", "x"}}), ConfigError);

  LoadOptions lenient;
  lenient.check_delay = false;
  nlohmann::json doc = nlohmann::json::parse(R"({"p1":1,"p2":1,"gamma1":1,"gamma2":1,"delta1":1,
    "delta2":1,"a1":0,"a2":1,"d":1,"q_left":"1","q_right":"1","delta_left":"2*x","delta_right":"0"})");
  const ProblemSpec spec = load_problem(doc, lenient);
  CHECK_FALSE(spec.conditions.delay_ok);
  CHECK(spec.conditions.worst_violation > 0.0);
  CHECK_FALSE(spec.conditions.violations.empty());
}

TEST_CASE("problem: conditions a and b") {
  const ProblemSpec canonical = testing::load("canonical");
  CHECK(canonical.conditions.condition_a_ok);
  CHECK(canonical.conditions.condition_b_ok);
  CHECK(canonical.conditions.refined_available());

  // Kink at x = 1: Delta'' is unbounded under refinement.
  const ProblemSpec kinked = testing::make({{"q_left", "1"}, {"delta_left", "x * abs(x - 1) / 4"}});
  CHECK(kinked.conditions.delay_ok);
  CHECK_FALSE(kinked.conditions.condition_a_ok);

  // Delta' = x exceeds 1 beyond x = 1 while x - Delta stays nonnegative.
  const ProblemSpec steep = testing::make({{"q_left", "1"}, {"delta_left", "x ^ 2 / 2"}});
  CHECK(steep.conditions.delay_ok);
  CHECK_FALSE(steep.conditions.condition_b_ok);
  CHECK_FALSE(steep.conditions.refined_available());
}

TEST_CASE("problem: to_json round trip") {
  const ProblemSpec spec = testing::load("canonical");
  const nlohmann::json j = to_json(spec);
  const ProblemSpec back = load_problem(j);
  CHECK(back.p1 == spec.p1);
  CHECK(back.p2 == spec.p2);
  CHECK(back.gamma1 == spec.gamma1);
  CHECK(back.q_left == spec.q_left);
  CHECK(back.delta_right == spec.delta_right);
  CHECK(to_json(back) == j);
}

TEST_CASE("problem: delay validation is deterministic") {
  const ProblemSpec spec = testing::load("canonical");
  const RefinedConditionsReport a = validate_delay(spec, 512);
  const RefinedConditionsReport b = validate_delay(spec, 512);
  CHECK(a.worst_violation == b.worst_violation);
  CHECK(a.grid_size == b.grid_size);
  CHECK_THROWS_AS(validate_delay(spec, 4), std::invalid_argument);
}
