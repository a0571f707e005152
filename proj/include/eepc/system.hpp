#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace eepc {

/// Physical-layer constants shared by every user.
struct SystemParams {
  double bandwidth_hz = 5e6;
  int processing_gain = 128;
  double noise_power = 5e-16;  // includes other-cell interference
  double max_power = 1.0;      // watts, per carrier
  int carriers = 1;
  int rx_antennas = 1;
  double common_rate_bps = 1e4;

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

struct UserProfile {
  int id = 0;
  std::optional<double> distance_m;
  /// h(carrier, antenna); empty until generated or supplied.
  Eigen::MatrixXd gains;
  double rate_bps = 1e4;
  double arrival_rate_pps = 0.0;
  std::optional<double> delay_bound_s;
  double pricing_factor = 0.0;

  /// Sum of gains over receive antennas on one carrier.
  double combined_gain(Eigen::Index carrier = 0) const { return gains.row(carrier).sum(); }

  void validate() const;
};

enum class ChannelModel { PathLossOnly, Rayleigh };

struct ChannelConfig {
  ChannelModel model = ChannelModel::PathLossOnly;
  double path_loss_constant = 0.097;
  double path_loss_exponent = 4.0;
};

/// Fills gains for every user that has a distance: h = A d^-exponent X, with
/// X = 1 or a unit-mean exponential draw per (carrier, antenna). Draws are
/// consumed users-outer, carriers-middle, antennas-inner. Users that already
/// carry explicit gains (and no distance) keep them and consume no draws.
std::vector<UserProfile> generate_gains(std::uint64_t seed, std::vector<UserProfile> users,
                                        const SystemParams& params, const ChannelConfig& channel = {});

/// Gain matrix (users x carriers) of combined antenna gains.
Eigen::MatrixXd gain_matrix(const std::vector<UserProfile>& users);

enum class SpreadingMode { RandomBinary, Orthogonal };

/// K unit-norm signature vectors of length N, stored as the columns of an
/// N x K matrix.
class SpreadingSet {
 public:
  explicit SpreadingSet(Eigen::MatrixXd sequences);

  const Eigen::MatrixXd& matrix() const noexcept { return sequences_; }
  Eigen::Index users() const noexcept { return sequences_.cols(); }
  Eigen::Index length() const noexcept { return sequences_.rows(); }
  auto sequence(Eigen::Index k) const { return sequences_.col(k); }

 private:
  Eigen::MatrixXd sequences_;
};

/// Random-binary mode draws i.i.d. +-1/sqrt(N) chips. Orthogonal mode uses
/// randomly chosen Walsh-Hadamard columns when N is a power of two and an
/// orthonormalized random binary basis otherwise; it requires K <= N.
SpreadingSet generate_spreading(std::uint64_t seed, Eigen::Index users, Eigen::Index length,
                                SpreadingMode mode);

}  // namespace eepc
