#include <doctest.h>

#include <cmath>
#include <numeric>

#include "eepc/delayqos.hpp"
#include "eepc/efficiency.hpp"
#include "eepc/errors.hpp"
#include "eepc/sir_model.hpp"
#include "support.hpp"

using namespace eepc;
using eepc::testing::Gen;
using eepc::testing::rel;

namespace {

const double kGammaStar = 6.474600379589358;
const double kF = 0.8569887087258917;

double size_from_rate(double rate, double b) { return 1.0 / (1.0 + b / (rate * kGammaStar)); }

}  // namespace

TEST_CASE("minimum rate meeting the delay bound") {
  CHECK(omega_star({100, 0.0, 0.01}, 0.8585) == doctest::Approx(100 / (0.01 * 0.8585)).epsilon(1e-14));
  CHECK(omega_star({100, 0.0, 0.01}, 0.8585) == doctest::Approx(11648.22).epsilon(1e-6));
  for (double lambda : {0.0, 3.0, 250.0}) {
    // With f = 1 the cross term vanishes but the root stays sqrt(1 + (D lambda)^2).
    const double dl = 0.02 * lambda;
    CHECK(omega_star({100, lambda, 0.02}, 1.0) ==
          doctest::Approx(100 / 0.02 * (1 + dl + std::sqrt(1 + dl * dl)) / 2).epsilon(1e-14));
  }
  CHECK_THROWS_AS(omega_star({100, 1.0, 0.0}, kF), DomainError);
  CHECK_THROWS_AS(omega_star({100, -1.0, 0.1}, kF), DomainError);
  CHECK_THROWS_AS(omega_star({100, 1.0, 0.1}, 0.0), DomainError);
}

TEST_CASE("user size") {
  CHECK(user_size(1e4, kGammaStar, 1e300) < 1e-280);
  CHECK(user_size(1e4, 5.0, 5e4) == doctest::Approx(0.5));
  // 1 / (1 + 5e6 / (11648 * 6.4867)).
  CHECK(user_size(11648.0, 6.4867, 5e6) == doctest::Approx(0.01489).epsilon(1e-3));
  CHECK_THROWS_AS(user_size(0.0, kGammaStar, 1.0), DomainError);
}

TEST_CASE("feasibility and capacity") {
  CHECK_FALSE(feasible({0.5, 0.5}));
  CHECK(feasible({0.3, 0.3, 0.3}));
  const double phi = 0.01489;
  CHECK(feasible(std::vector<double>(67, phi)));
  CHECK_FALSE(feasible(std::vector<double>(68, phi)));
  CHECK(capacity(0.1) == 9);
  CHECK(capacity(phi) == 67);
  CHECK(capacity(1.0 - 1e-12) == 1);
  CHECK(capacity(0.6) == 1);
  CHECK_THROWS_AS(capacity(1.0), DomainError);
  Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const double s = gen.log_uniform(1e-4, 0.999);
    const int k = capacity(s);
    REQUIRE(k * s < 1.0);
    REQUIRE((k + 1) * s >= 1.0);
  }
}

TEST_CASE("equilibrium utility closed form") {
  const double scale = 5e6 * 0.2 * kF / (0.01 * kGammaStar);
  CHECK(ne_utility_delay(0, {0.3}, 0.2, 5e6, 0.01, kF, kGammaStar) == doctest::Approx(scale));
  CHECK(ne_utility_delay(1, {0.2, 0.2}, 0.2, 5e6, 0.01, kF, kGammaStar) == doctest::Approx(scale * 0.6 / 0.8));
  CHECK_THROWS_AS(ne_utility_delay(0, {0.6, 0.4}, 0.2, 5e6, 0.01, kF, kGammaStar), InfeasibleError);
}

TEST_CASE("direct power solve") {
  const double b = 5e6;
  const auto one = solve_delay_powers(Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Constant(1, 2e4), b, 0.01,
                                      kGammaStar);
  CHECK(one(0) == doctest::Approx(kGammaStar * 0.01 * 2e4 / (b * 0.2)));

  // Two identical users: (c - 1) q = noise with c = B/(R gamma*), solved by hand.
  const double rate = 3e5;
  const double c = b / (rate * kGammaStar);
  const auto two = solve_delay_powers(Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Constant(2, rate), b, 0.01,
                                      kGammaStar);
  CHECK(two(0) == doctest::Approx(0.01 / (c - 1) / 0.5).epsilon(1e-13));
  CHECK(two(1) == doctest::Approx(two(0)).epsilon(1e-14));
  const double phi = size_from_rate(rate, b);
  CHECK(rate * kF / two(0) ==
        doctest::Approx(ne_utility_delay(0, {phi, phi}, 0.5, b, 0.01, kF, kGammaStar)).epsilon(1e-12));

  // Both users exactly half the resource.
  CHECK_THROWS_AS(solve_delay_powers(Eigen::VectorXd::Constant(2, 0.5), Eigen::VectorXd::Constant(2, b / kGammaStar),
                                     b, 0.01, kGammaStar),
                  InfeasibleError);
  CHECK_THROWS_AS(solve_delay_powers(Eigen::VectorXd::Constant(3, 0.5), Eigen::VectorXd::Constant(3, b / kGammaStar),
                                     b, 0.01, kGammaStar),
                  InfeasibleError);
}

TEST_CASE("direct solve agrees with the closed form on heterogeneous users") {
  Gen gen(5);
  const double b = 5e6;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = trial == 0 ? 5 : gen.integer(1, 30);
    Eigen::VectorXd h = gen.vector(k, 0.01, 1.0), rates(k);
    std::vector<double> sizes;
    for (int i = 0; i < k; ++i) {
      const QosProfile q{100, gen.uniform(0.0, 200.0), gen.log_uniform(1e-3, 1.0)};
      rates(i) = omega_star(q, kF);
      sizes.push_back(size_from_rate(rates(i), b));
    }
    if (!feasible(sizes)) {
      CHECK_THROWS_AS(solve_delay_powers(h, rates, b, 0.01, kGammaStar), InfeasibleError);
      continue;
    }
    const Eigen::VectorXd p = solve_delay_powers(h, rates, b, 0.01, kGammaStar);
    // SIR check with the rate-spread model.
    const RateSpreadModel model(h, rates, b, 0.01);
    const Eigen::VectorXd sir = model.sirs(p);
    for (int i = 0; i < k; ++i) {
      CHECK(rel(sir(i), kGammaStar) < 1e-9);
      const double closed = ne_utility_delay(static_cast<std::size_t>(i), sizes, h(i), b, 0.01, kF, kGammaStar);
      CHECK(rel(rates(i) * kF / p(i), closed) < 1e-9);
    }
  }
}

TEST_CASE("monotonicity of rate, size and capacity") {
  for (double lambda : {0.0, 10.0, 100.0}) {
    double prev_omega = INFINITY;
    for (double d = 1e-3; d < 10.0; d *= 1.5) {
      const double w = omega_star({100, lambda, d}, kF);
      CHECK(w <= prev_omega);
      prev_omega = w;
    }
  }
  for (double d : {1e-3, 1e-2, 1.0}) {
    double prev_omega = 0.0, prev_size = 0.0;
    int prev_cap = 1 << 30;
    for (double lambda = 0.0; lambda < 1000.0; lambda += 7.0) {
      const double w = omega_star({100, lambda, d}, kF);
      const double s = user_size(w, kGammaStar, 5e6);
      CHECK(w >= prev_omega);
      CHECK(s >= prev_size);
      CHECK(capacity(s) <= prev_cap);
      prev_omega = w;
      prev_size = s;
      prev_cap = capacity(s);
    }
  }
}

TEST_CASE("the rate floor gives the best equilibrium") {
  Gen gen(9);
  const double b = 5e6;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = gen.integer(1, 10);
    Eigen::VectorXd h = gen.vector(k, 0.01, 1.0), floor_rates(k);
    for (int i = 0; i < k; ++i) floor_rates(i) = omega_star({100, gen.uniform(0, 50), gen.log_uniform(0.01, 1)}, kF);
    Eigen::VectorXd faster = floor_rates;
    for (int i = 0; i < k; ++i) faster(i) *= gen.uniform(1.0, 1.5);
    std::vector<double> sizes;
    for (int i = 0; i < k; ++i) sizes.push_back(size_from_rate(faster(i), b));
    if (!feasible(sizes)) continue;
    const Eigen::VectorXd p0 = solve_delay_powers(h, floor_rates, b, 0.01, kGammaStar);
    const Eigen::VectorXd p1 = solve_delay_powers(h, faster, b, 0.01, kGammaStar);
    for (int i = 0; i < k; ++i) CHECK(floor_rates(i) * kF / p0(i) >= faster(i) * kF / p1(i) * (1 - 1e-12));
  }
}
