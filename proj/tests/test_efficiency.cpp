#include <doctest.h>

#include <cmath>

#include "eepc/efficiency.hpp"
#include "eepc/errors.hpp"
#include "support.hpp"

using namespace eepc;
using eepc::testing::exp_root;
using eepc::testing::psr;

TEST_CASE("exp-m efficiency at the end points") {
  const auto f = EfficiencyModel::exp_m(100);
  CHECK(f.eval(0.0) == 0.0);
  CHECK(EfficiencyModel::exp_m(1).eval(1e3) == doctest::Approx(1.0));
  CHECK(f.eval(800.0) == 1.0);
  CHECK_THROWS_AS(f.eval(-1e-9), DomainError);
}

TEST_CASE("exp-m efficiency at 6.4867 is about 0.8586") {
  // (1 - e^-6.4867)^100 computed in long double.
  const long double expected = std::pow(1.0L - std::exp(-6.4867L), 100.0L);
  CHECK(EfficiencyModel::exp_m(100).eval(6.4867) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
  CHECK(EfficiencyModel::exp_m(100).eval(6.4867) == doctest::Approx(0.8585).epsilon(1e-3));
}

TEST_CASE("derivative at zero and against central differences") {
  CHECK(EfficiencyModel::exp_m(2).derivative(0.0) == 0.0);
  CHECK(EfficiencyModel::exp_m(1).derivative(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(EfficiencyModel::exp_m(3).derivative(-1.0), DomainError);

  eepc::testing::Gen gen(7);
  for (int i = 0; i < 200; ++i) {
    const int m = gen.integer(1, 500);
    const double g = gen.uniform(0.05, 15.0);
    const long double x = g, h = 1e-6L * x;
    auto f = [m](long double t) { return std::pow(1.0L - std::exp(-t), static_cast<long double>(m)); };
    const double fd = static_cast<double>((f(x + h) - f(x - h)) / (2 * h));
    const double d = EfficiencyModel::exp_m(m).derivative(g);
    if (fd > 1e-200) CHECK(eepc::testing::rel(d, fd) < 1e-6);
  }
}

TEST_CASE("efficiency stays in [0, 1] and is nondecreasing") {
  eepc::testing::Gen gen(11);
  for (int i = 0; i < 50; ++i) {
    const auto f = EfficiencyModel::exp_m(gen.integer(1, 1000));
    double prev = 0.0;
    for (double g = 0.0; g < 40.0; g += 0.01) {
      const double v = f.eval(g);
      REQUIRE(v >= prev);
      REQUIRE(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("gamma star matches the bisection oracle") {
  // Frozen from exp_root(): e^g = 1 + M g.
  struct Case {
    int m;
    double root;
  };
  const Case cases[] = {{2, 1.2564312086261697},
                        {10, 3.6149504270875306},
                        {50, 5.646614930940556},
                        {100, 6.474600379589358},
                        {500, 8.33535399802994}};
  for (const auto& c : cases) {
    CAPTURE(c.m);
    CHECK(exp_root(c.m) == doctest::Approx(c.root).epsilon(1e-12));
    const double g = gamma_star(EfficiencyModel::exp_m(c.m));
    CHECK(std::abs(g - c.root) < 1e-10);
    CHECK(std::abs(std::exp(g) - 1.0 - c.m * g) / std::exp(g) < 1e-9);
  }
}

TEST_CASE("gamma star balances f against g f'") {
  for (int m : {2, 3, 17, 100, 1000, 5000}) {
    const auto f = EfficiencyModel::exp_m(m);
    const double g = gamma_star(f);
    CHECK(std::abs(f.eval(g) - g * f.derivative(g)) < 1e-10 * f.eval(g));
  }
}

TEST_CASE("a single-bit packet has no interior maximizer") {
  CHECK_THROWS_AS(gamma_star(EfficiencyModel::exp_m(1)), NoInteriorMaximizer);
  try {
    gamma_star(EfficiencyModel::exp_m(1));
  } catch (const NoInteriorMaximizer& e) {
    CHECK(std::string(e.what()) == "no interior maximizer");
  }
}

TEST_CASE("f(a p)/p peaks where a p is within 1% of gamma star") {
  eepc::testing::Gen gen(3);
  for (int i = 0; i < 30; ++i) {
    const int m = gen.integer(2, 400);
    const double a = gen.log_uniform(0.1, 1e3);
    const auto f = EfficiencyModel::exp_m(m);
    const double g = gamma_star(f);
    // Grid out to five times the maximizer.
    const double p = eepc::testing::grid_argmax([&](double x) { return x > 0 ? f.eval(a * x) / x : 0.0; }, 0.0,
                                                5.0 * g / a, 100001);
    CHECK(std::abs(a * p - g) < 0.01 * g);
  }
}

TEST_CASE("tabulated model reproduces a sampled exp-m curve") {
  std::vector<double> x, y;
  for (double g = 0.0; g <= 30.0; g += 0.05) {
    x.push_back(g);
    y.push_back(psr(g, 100));
  }
  y.back() = 1.0;
  const auto table = EfficiencyModel::tabulated(x, y, 100);
  CHECK(table.eval(0.0) == 0.0);
  CHECK(table.eval(50.0) == 1.0);
  CHECK(table.eval(6.0) == doctest::Approx(psr(6.0, 100)).epsilon(1e-4));
  CHECK(gamma_star(table) == doctest::Approx(6.474600379589358).epsilon(1e-3));
  double prev = 0.0;
  for (double g = 0.0; g < 35.0; g += 0.003) {
    REQUIRE(table.eval(g) >= prev);
    prev = table.eval(g);
  }
}

TEST_CASE("tabulated model rejects malformed tables") {
  CHECK_THROWS_AS(EfficiencyModel::tabulated({0.1, 1.0}, {0.0, 1.0}, 10), DomainError);
  CHECK_THROWS_AS(EfficiencyModel::tabulated({0.0, 1.0, 2.0}, {0.0, 0.7, 0.6}, 10), DomainError);
  CHECK_THROWS_AS(EfficiencyModel::tabulated({0.0, 1.0}, {0.0, 0.5}, 10), DomainError);
  CHECK_THROWS_AS(EfficiencyModel::tabulated({0.0, 1.0, 1.0}, {0.0, 0.5, 1.0}, 10), DomainError);
}

TEST_CASE("a concave table has no interior maximizer") {
  std::vector<double> x, y;
  for (double g = 0.0; g <= 20.0; g += 0.1) {
    x.push_back(g);
    y.push_back(-std::expm1(-g));
  }
  y.back() = 1.0;
  CHECK_THROWS_AS(gamma_star(EfficiencyModel::tabulated(x, y, 1)), NoInteriorMaximizer);
}
