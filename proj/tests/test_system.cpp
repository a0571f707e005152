#include <doctest.h>

#include <cmath>

#include "eepc/errors.hpp"
#include "eepc/system.hpp"
#include "support.hpp"

using namespace eepc;

namespace {

std::vector<UserProfile> at_distance(int count, double d) {
  std::vector<UserProfile> users(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    users[static_cast<std::size_t>(i)].id = i;
    users[static_cast<std::size_t>(i)].distance_m = d;
  }
  return users;
}

}  // namespace

TEST_CASE("path loss at 100 m") {
  SystemParams params;
  const auto users = generate_gains(1, at_distance(1, 100.0), params, {ChannelModel::PathLossOnly});
  CHECK(users[0].gains(0, 0) == doctest::Approx(0.097 * std::pow(100.0, -4)).epsilon(1e-14));
  CHECK(users[0].gains(0, 0) == doctest::Approx(9.7e-10).epsilon(1e-12));
}

TEST_CASE("rayleigh gains are reproducible and unit-mean") {
  SystemParams params;
  params.carriers = 2;
  params.rx_antennas = 3;
  const auto a = generate_gains(99, at_distance(5, 80.0), params, {ChannelModel::Rayleigh});
  const auto b = generate_gains(99, at_distance(5, 80.0), params, {ChannelModel::Rayleigh});
  const auto c = generate_gains(100, at_distance(5, 80.0), params, {ChannelModel::Rayleigh});
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].gains.rows() == 2);
    CHECK(a[k].gains.cols() == 3);
    CHECK(a[k].gains == b[k].gains);
  }
  CHECK(a[0].gains != c[0].gains);

  params = SystemParams{};
  const auto many = generate_gains(5, at_distance(1000000, 100.0), params, {ChannelModel::Rayleigh});
  double sum = 0.0;
  for (const auto& u : many) sum += u.gains(0, 0);
  CHECK(sum / many.size() == doctest::Approx(9.7e-10).epsilon(0.01));
}

TEST_CASE("draw order is users, then carriers, then antennas") {
  SystemParams params;
  params.carriers = 2;
  params.rx_antennas = 2;
  const auto users = generate_gains(21, at_distance(2, 1.0), params, {ChannelModel::Rayleigh, 1.0, 4.0});
  std::mt19937_64 engine(21);
  for (const auto& u : users)
    for (int l = 0; l < 2; ++l)
      for (int a = 0; a < 2; ++a) {
        const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        CHECK(u.gains(l, a) == -std::log1p(-unit));
      }
}

TEST_CASE("explicit gains are kept and consume no draws") {
  SystemParams params;
  auto users = at_distance(2, 50.0);
  UserProfile fixed;
  fixed.id = 7;
  fixed.gains = Eigen::MatrixXd::Constant(1, 1, 0.25);
  users.insert(users.begin(), fixed);
  const auto with_fixed = generate_gains(4, users, params, {ChannelModel::Rayleigh});
  const auto without = generate_gains(4, at_distance(2, 50.0), params, {ChannelModel::Rayleigh});
  CHECK(with_fixed[0].gains(0, 0) == 0.25);
  CHECK(with_fixed[1].gains == without[0].gains);
  CHECK(with_fixed[2].gains == without[1].gains);
}

TEST_CASE("gain matrix sums antennas") {
  UserProfile u;
  u.gains.resize(2, 2);
  u.gains << 1, 2, 3, 4;
  const Eigen::MatrixXd g = gain_matrix({u, u});
  CHECK(g.rows() == 2);
  CHECK(g(0, 0) == 3);
  CHECK(g(1, 1) == 7);
}

TEST_CASE("system parameters validate") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.processing_gain = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = SystemParams{};
  p.noise_power = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  UserProfile u;
  u.gains = Eigen::MatrixXd::Constant(1, 1, 0.0);
  CHECK_THROWS_AS(u.validate(), DomainError);
  u.gains(0, 0) = 1.0;
  u.delay_bound_s = 0.01;
  CHECK_NOTHROW(u.validate());
}

TEST_CASE("random binary signatures") {
  const auto s = generate_spreading(42, 4, 128, SpreadingMode::RandomBinary);
  CHECK(s.users() == 4);
  CHECK(s.length() == 128);
  for (Eigen::Index k = 0; k < 4; ++k) {
    CHECK(std::abs(s.sequence(k).norm() - 1.0) < 1e-12);
    CHECK((s.sequence(k).array().abs() - 1.0 / std::sqrt(128.0)).abs().maxCoeff() < 1e-15);
  }
  CHECK(generate_spreading(42, 4, 128, SpreadingMode::RandomBinary).matrix() == s.matrix());
}

TEST_CASE("random binary cross-correlation has mean square 1/N") {
  const int n = 32;
  const auto s = generate_spreading(8, 2 * 10000, n, SpreadingMode::RandomBinary);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < 10000; ++i) {
    const double c = s.sequence(2 * i).dot(s.sequence(2 * i + 1));
    sum += c * c;
  }
  CHECK(sum / 10000 == doctest::Approx(1.0 / n).epsilon(0.05));
}

TEST_CASE("orthogonal signatures") {
  const auto two = generate_spreading(1, 2, 2, SpreadingMode::Orthogonal);
  CHECK(std::abs(two.sequence(0).dot(two.sequence(1))) < 1e-12);
  CHECK_THROWS_AS(generate_spreading(1, 3, 2, SpreadingMode::Orthogonal), DimensionError);

  for (int n : {8, 12, 64, 100}) {
    CAPTURE(n);
    const auto s = generate_spreading(5, n / 2, n, SpreadingMode::Orthogonal);
    const Eigen::MatrixXd gram = s.matrix().transpose() * s.matrix();
    CHECK((gram - Eigen::MatrixXd::Identity(n / 2, n / 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
