#include "eepc/system.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "eepc/errors.hpp"
#include "eepc/random.hpp"

namespace eepc {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("system.") + field + " must be strictly positive");
  }
}

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void SystemParams::validate() const {
  require_positive(bandwidth_hz, "bandwidth_hz");
  require_positive(processing_gain, "processing_gain");
  require_positive(noise_power, "noise_power");
  require_positive(max_power, "max_power");
  require_positive(carriers, "carriers");
  require_positive(rx_antennas, "rx_antennas");
  require_positive(common_rate_bps, "common_rate_bps");
}

void UserProfile::validate() const {
  if (distance_m && !(*distance_m > 0.0)) throw DomainError("user.distance_m must be positive");
  if (gains.size() > 0 && !(gains.array() > 0.0).all()) {
    throw DomainError("user.gains must be strictly positive");
  }
  if (!(rate_bps > 0.0)) throw DomainError("user.rate_bps must be positive");
  if (!(arrival_rate_pps >= 0.0)) throw DomainError("user.arrival_rate_pps must be nonnegative");
  if (delay_bound_s && !(*delay_bound_s > 0.0)) throw DomainError("user.delay_bound_s must be positive");
  if (!(pricing_factor >= 0.0)) throw DomainError("user.pricing_factor must be nonnegative");
}

std::vector<UserProfile> generate_gains(std::uint64_t seed, std::vector<UserProfile> users,
                                        const SystemParams& params, const ChannelConfig& channel) {
  Rng rng(seed);
  for (auto& user : users) {
    user.validate();
    if (!user.distance_m) {
      if (user.gains.rows() != params.carriers || user.gains.cols() != params.rx_antennas) {
        throw DimensionError("user " + std::to_string(user.id) +
                             ": explicit gains must be carriers x rx_antennas");
      }
      continue;
    }
    const double path_loss = channel.path_loss_constant * std::pow(*user.distance_m, -channel.path_loss_exponent);
    user.gains.resize(params.carriers, params.rx_antennas);
    for (int c = 0; c < params.carriers; ++c) {
      for (int a = 0; a < params.rx_antennas; ++a) {
        const double fading = channel.model == ChannelModel::Rayleigh ? rng.exponential() : 1.0;
        user.gains(c, a) = path_loss * fading;
      }
    }
  }
  return users;
}

Eigen::MatrixXd gain_matrix(const std::vector<UserProfile>& users) {
  if (users.empty()) return {};
  const Eigen::Index carriers = users.front().gains.rows();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(users.size()), carriers);
  for (std::size_t k = 0; k < users.size(); ++k) {
    if (users[k].gains.rows() != carriers) throw DimensionError("gain_matrix: carrier count differs between users");
    h.row(static_cast<Eigen::Index>(k)) = users[k].gains.rowwise().sum().transpose();
  }
  return h;
}

SpreadingSet::SpreadingSet(Eigen::MatrixXd sequences) : sequences_(std::move(sequences)) {
  for (Eigen::Index k = 0; k < sequences_.cols(); ++k) {
    if (std::abs(sequences_.col(k).norm() - 1.0) > 1e-12) {
      throw DomainError("spreading: sequence " + std::to_string(k) + " is not unit norm");
    }
  }
}

SpreadingSet generate_spreading(std::uint64_t seed, Eigen::Index users, Eigen::Index length,
                                SpreadingMode mode) {
  if (users < 1 || length < 1) throw DimensionError("spreading: need at least one user and one chip");
  Rng rng(seed);
  const double chip = 1.0 / std::sqrt(static_cast<double>(length));
  auto random_binary = [&](Eigen::Index cols) {
    Eigen::MatrixXd s(length, cols);
    for (Eigen::Index k = 0; k < cols; ++k)
      for (Eigen::Index n = 0; n < length; ++n) s(n, k) = rng.coin() ? chip : -chip;
    return s;
  };

  if (mode == SpreadingMode::RandomBinary) return SpreadingSet(random_binary(users));

  if (users > length) {
    throw DimensionError("spreading: orthogonal mode needs K <= N (K=" + std::to_string(users) +
                         ", N=" + std::to_string(length) + ")");
  }
  if (is_power_of_two(length)) {
    // Sylvester construction; pick K distinct columns by partial Fisher-Yates.
    Eigen::MatrixXd hadamard = Eigen::MatrixXd::Constant(1, 1, 1.0);
    while (hadamard.rows() < length) {
      const Eigen::Index n = hadamard.rows();
      Eigen::MatrixXd next(2 * n, 2 * n);
      next << hadamard, hadamard, hadamard, -hadamard;
      hadamard = std::move(next);
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(length));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Eigen::MatrixXd s(length, users);
    for (Eigen::Index k = 0; k < users; ++k) {
      const auto pick = k + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(length - k)));
      std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick)]);
      s.col(k) = hadamard.col(order[static_cast<std::size_t>(k)]) * chip;
    }
    return SpreadingSet(std::move(s));
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_binary(users));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(length, users);
  for (Eigen::Index k = 0; k < users; ++k) q.col(k).normalize();
  return SpreadingSet(std::move(q));
}

}  // namespace eepc
