#pragma once

#include <Eigen/Dense>
#include <vector>

#include "eepc/dynamics.hpp"
#include "eepc/efficiency.hpp"
#include "eepc/system.hpp"

namespace eepc {

/// Power allocation over D carriers with the resulting per-carrier SIRs.
struct McAllocation {
  Eigen::MatrixXd powers;  // K x D
  Eigen::MatrixXd sirs;    // K x D
  /// Carriers with positive power, per user.
  std::vector<std::vector<Eigen::Index>> support;
};

std::vector<std::vector<Eigen::Index>> support_of(const Eigen::MatrixXd& powers);

/// Total throughput over total power: sum_l R f(gamma_l) / sum_l p_l (0 when
/// no power is spent).
double utility_mc(double rate_bps, const Eigen::RowVectorXd& sirs, const Eigen::RowVectorXd& powers,
                  const EfficiencyModel& model);

/// Per-carrier SIRs under the 1/N matched-filter model, gains K x D.
Eigen::MatrixXd sir_mc(const Eigen::MatrixXd& powers, const Eigen::MatrixXd& gains, int processing_gain,
                       double noise_power);

/// Multicarrier best response: all power on the carrier that needs the least
/// power to reach gamma* (lowest index on ties). When no carrier can reach
/// gamma* within P_max, transmit P_max on the carrier with the largest
/// f(gamma(P_max)).
BestResponse best_response_mc(Eigen::Index k, const Eigen::MatrixXd& powers, const Eigen::MatrixXd& gains,
                              int processing_gain, double noise_power, double gamma_star, double max_power,
                              const EfficiencyModel& model);

/// The joint multicarrier energy-efficiency game.
class MulticarrierGame final : public Game {
 public:
  MulticarrierGame(Eigen::MatrixXd gains, Eigen::VectorXd rates, int processing_gain, double noise_power,
                   double max_power, EfficiencyModel efficiency);

  Eigen::Index users() const override { return gains_.rows(); }
  Eigen::Index carriers() const override { return gains_.cols(); }
  double max_power() const override { return max_power_; }

  std::unique_ptr<GameSession> open(const Eigen::MatrixXd& powers) const override;
  Eigen::MatrixXd sirs(const Eigen::MatrixXd& powers) const override;
  Eigen::VectorXd efficiencies(const Eigen::MatrixXd& powers) const override;
  Eigen::VectorXd payoffs(const Eigen::MatrixXd& powers) const override { return efficiencies(powers); }
  std::function<double(const Eigen::RowVectorXd&)> unilateral_payoff(
      Eigen::Index k, const Eigen::MatrixXd& powers) const override;

  const Eigen::MatrixXd& gains() const { return gains_; }
  const Eigen::VectorXd& rates() const { return rates_; }
  int processing_gain() const { return processing_gain_; }
  double noise_power() const { return noise_; }
  double gamma_star() const { return gamma_star_; }
  const EfficiencyModel& efficiency() const { return efficiency_; }

 private:
  Eigen::MatrixXd gains_;
  Eigen::VectorXd rates_;
  int processing_gain_;
  double noise_;
  double max_power_;
  EfficiencyModel efficiency_;
  double gamma_star_;
};

struct McReport {
  EquilibriumReport report;
  /// Users whose only active carrier is l, per carrier l.
  std::vector<int> carrier_counts;
  bool single_carrier_support = false;
};

/// Best-response dynamics of the multicarrier game from all-zero powers.
McReport run_mc_game(const MulticarrierGame& game, const IterateOptions& options = {});

/// Every user plays the single-carrier energy-efficiency game on every
/// carrier independently; D separate games assembled into one K x D matrix.
McAllocation independent_per_carrier_baseline(const MulticarrierGame& game, const IterateOptions& options = {});

/// Sum over users of the multicarrier utility.
double total_utility_mc(const MulticarrierGame& game, const Eigen::MatrixXd& powers);

}  // namespace eepc
