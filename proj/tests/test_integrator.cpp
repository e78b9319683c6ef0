#include <cmath>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "rsl/errors.hpp"
#include "rsl/integrator.hpp"
#include "rsl/picard.hpp"
#include "support.hpp"

using namespace rsl;

namespace {

oracle::Constant constant_oracle(const ProblemSpec& s, double q_left, double q_right) {
  oracle::Constant o;
  o.p1 = s.p1;
  o.p2 = s.p2;
  o.g1 = s.gamma1;
  o.g2 = s.gamma2;
  o.d1 = s.delta1;
  o.d2 = s.delta2;
  o.a1 = s.a1;
  o.a2 = s.a2;
  o.d = s.d;
  o.q_left = q_left;
  o.q_right = q_right;
  return o;
}

double sup_error(const Solution& sol, const oracle::Constant& o, double lambda) {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = oracle::kPi * i / 400;
    const auto exact = x <= oracle::kHalfPi ? o.w1(lambda, x) : o.w2(lambda, x);
    const State st = sol(x);
    const double scale = std::sqrt(lambda);
    worst = std::max({worst, std::abs(st.w - exact.w), std::abs(st.dw - exact.dw) / scale});
  }
  return worst;
}

}  // namespace

TEST_CASE("integrator: q = 0 reproduces cos(s x)") {
  const ProblemSpec spec = testing::load("trivial");
  for (double lambda : {1.0, 25.0, 400.0, 1e4}) {
    CAPTURE(lambda);
    const Solution sol = solve(spec, lambda, 1e-11);
    CHECK(sup_error(sol, constant_oracle(spec, 0, 0), lambda) < 1e-8);
  }
}

TEST_CASE("integrator: constant q, general transmission, no delay") {
  const ProblemSpec spec = testing::make({{"p1", 2}, {"p2", 1}, {"gamma1", 1}, {"gamma2", 2},
                                          {"a1", 0.7}, {"a2", -0.4}, {"q_left", "1.5"},
                                          {"q_right", "-0.5"}});
  const oracle::Constant o = constant_oracle(spec, 1.5, -0.5);
  for (double lambda : {4.0, 100.0, 900.0}) {
    CAPTURE(lambda);
    CHECK(sup_error(solve(spec, lambda, 1e-11), o, lambda) < 1e-8);
  }
}

TEST_CASE("integrator: delayed problem agrees with a fixed-step oracle") {
  const ProblemSpec spec = testing::load("canonical");
  for (double lambda : {25.0, 100.0}) {
    CAPTURE(lambda);
    const Solution sol = solve(spec, lambda, 1e-11);

    oracle::Delayed left;
    left.p = 1;
    left.q = [](double) { return 1.0; };
    left.delay = [](double x) { return x / 2; };
    left.run(lambda, 1.0, 0.0);

    oracle::Delayed right;
    right.p = 2;
    right.q = [](double) { return 1.0; };
    right.delay = [](double x) { return (x - oracle::kHalfPi) / 2; };
    right.lo = oracle::kHalfPi;
    right.hi = oracle::kPi;
    right.run(lambda, 2.0 * left.w.back(), left.dw.back());

    double worst = 0.0;
    for (std::size_t i = 0; i < left.x.size(); i += 100) {
      worst = std::max(worst, std::abs(sol.w1(left.x[i]).w - left.w[i]));
      worst = std::max(worst, std::abs(sol.w2(right.x[i]).w - right.w[i]));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("integrator: transmission conditions hold exactly at the junction") {
  const ProblemSpec spec = testing::load("wide_left");
  const Solution sol = solve(spec, 150.0, 1e-10);
  const State left = sol.w1(kHalfPi);
  const State right = sol.w2(kHalfPi);
  CHECK(std::abs(spec.gamma1 * left.w - spec.delta1 * right.w) <= 1e-14 * std::abs(left.w));
  CHECK(std::abs(spec.gamma2 * left.dw - spec.delta2 * right.dw) <= 1e-14 * std::abs(left.dw));
  const State t = transmit(spec, left);
  CHECK(t.w == right.w);
  CHECK(t.dw == right.dw);
}

TEST_CASE("integrator: solution at pi/2 is taken from the left branch") {
  const ProblemSpec spec = testing::load("canonical");
  const Solution sol = solve(spec, 64.0, 1e-10);
  CHECK(sol(kHalfPi).w == sol.w1(kHalfPi).w);
  CHECK(sol(std::nextafter(kHalfPi, 4.0)).w == sol.w2(std::nextafter(kHalfPi, 4.0)).w);
}

TEST_CASE("integrator: linear in the boundary data (seeded)") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uc(-3.0, 3.0);
  std::uniform_real_distribution<double> ul(5.0, 500.0);
  const ProblemSpec base = testing::load("canonical");
  for (int trial = 0; trial < 6; ++trial) {
    const double c = uc(rng);
    const double lambda = ul(rng);
    CAPTURE(c);
    CAPTURE(lambda);
    ProblemSpec scaled = base;
    scaled.a1 *= c;
    scaled.a2 *= c;
    const Solution a = solve(base, lambda, 1e-10);
    const Solution b = solve(scaled, lambda, 1e-10);
    for (double x : {0.3, 1.2, kHalfPi, 2.0, 2.9, kPi}) {
      CHECK(b(x).w == doctest::Approx(c * a(x).w).epsilon(1e-9).scale(std::abs(c)));
    }
  }
}

TEST_CASE("integrator: step cap keeps dense output accurate between nodes") {
  const ProblemSpec spec = testing::load("trivial");
  const double lambda = 2500.0;
  const Solution sol = solve(spec, lambda, 1e-10);
  CHECK(sol.w1.steps() >= 4 * 50 / 2);
  double worst = 0.0;
  for (int i = 0; i <= 5000; ++i) {
    const double x = kPi * i / 5000;
    worst = std::max(worst, std::abs(sol(x).w - std::cos(50 * x)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("integrator: preconditions") {
  const ProblemSpec spec = testing::load("trivial");
  CHECK_THROWS_AS(solve(spec, 0.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(solve(spec, -4.0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(solve(spec, NAN, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(solve(spec, 4.0, 1e-20), std::invalid_argument);
  CHECK_THROWS_AS(solve(spec, 4.0, 0.1), std::invalid_argument);
  const Solution sol = solve(spec, 4.0, 1e-10);
  CHECK_THROWS_AS(sol.w1(2.0), IntegrationError);
  CHECK_THROWS_AS(solve_w2(spec, 9.0, sol.w1, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(solve_w2(spec, 4.0, sol.w2, 1e-10), std::invalid_argument);
}

TEST_CASE("integrator: deterministic") {
  const ProblemSpec spec = testing::load("canonical");
  const Solution a = solve(spec, 333.0, 1e-10);
  const Solution b = solve(spec, 333.0, 1e-10);
  REQUIRE(a.w2.steps() == b.w2.steps());
  CHECK(a.w2(kPi).w == b.w2(kPi).w);
  CHECK(a.w2(kPi).dw == b.w2(kPi).dw);
}

TEST_CASE("picard: matches the closed form without delay") {
  const ProblemSpec spec = testing::make({{"q_left", "1"}, {"q_right", "1"}});
  const oracle::Constant o = constant_oracle(spec, 1, 1);
  for (double lambda : {25.0, 100.0}) {
    const PicardResult pic = picard_solve(spec, lambda, 200, 1e-13);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = kHalfPi * i / 200;
      worst = std::max(worst, std::abs(pic.w1(x).w - o.w1(lambda, x).w));
      worst = std::max(worst, std::abs(pic.w2(x + kHalfPi).w - o.w2(lambda, x + kHalfPi).w));
    }
    CHECK(worst < 1e-6);
    CHECK(pic.iterations > 2);
    CHECK_FALSE(pic.ratios.empty());
  }
}

TEST_CASE("picard: agrees with the RK path on the delayed problems") {
  for (const char* name : {"canonical", "wide_left"}) {
    CAPTURE(name);
    const ProblemSpec spec = testing::load(name);
    for (double lambda : {25.0, 100.0}) {
      const Solution sol = solve(spec, lambda, 1e-11);
      const PicardResult pic = picard_solve(spec, lambda, 200, 1e-13);
      for (int i = 0; i <= 64; ++i) {
        const double x = kHalfPi * i / 64;
        CHECK(std::abs(pic.w1(x).w - sol.w1(x).w) < 1e-6);
        CHECK(std::abs(pic.w2(x + kHalfPi).w - sol.w2(x + kHalfPi).w) < 1e-6);
      }
    }
  }
}

TEST_CASE("picard: iteration budget exhaustion reports the last ratio") {
  const ProblemSpec spec = testing::load("canonical");
  try {
    picard_solve(spec, 0.01, 2, 1e-15);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_ratio() >= 0.0);
  }
}
