#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <variant>
#include <vector>

#include "eepc/efficiency.hpp"
#include "eepc/sir_model.hpp"

namespace eepc {

// ---------------------------------------------------------------------------
// Objectives

/// Reliable bits per joule, R f(gamma) / p.
struct BitsPerJoule {};

/// Bits per joule minus a linear price c_k p_k.
struct PricedBitsPerJoule {
  Eigen::VectorXd price;
};

/// zeta_k log(1 + gamma_k) - c_k p_k.
struct LogPriced {
  Eigen::VectorXd weight;
  Eigen::VectorXd price;
};

/// Cost b_k p_k + c_k (target_k - gamma_k)^2, minimized (payoff is its negative).
struct SirTrackingCost {
  Eigen::VectorXd power_weight;
  Eigen::VectorXd sir_weight;
  Eigen::VectorXd target;
};

using Objective = std::variant<BitsPerJoule, PricedBitsPerJoule, LogPriced, SirTrackingCost>;

std::string objective_name(const Objective& objective);

/// Throws DomainError on negative weights, nonpositive targets or size mismatch.
void validate(const Objective& objective, Eigen::Index users);

/// R f(gamma) / p, continuously extended to 0 at p = 0.
double utility_bpj(double rate_bps, double sir, double power, const EfficiencyModel& model);

/// Value user k maximizes under `objective` at SIR `sir` and power `power`.
double payoff(const Objective& objective, Eigen::Index k, double rate_bps, const EfficiencyModel& model,
              double sir, double power);

// ---------------------------------------------------------------------------
// Best responses for an SIR linear in own power, gamma_k = a p_k.

struct PowerResponse {
  double power = 0.0;
  /// Unconstrained optimum lay above P_max and was clipped.
  bool saturated = false;
};

/// min(gamma*/a, P_max).
PowerResponse best_response_bpj(double own_gain, double gamma_star, double max_power);

/// Maximizer of R f(a p)/p - c p. The search runs over (0, p_bpj]: a 256-point
/// scan locates the basin, golden-section refines it to 1e-10 relative.
/// Returns 0 when no positive power yields positive net utility.
PowerResponse best_response_priced(double own_gain, double rate_bps, const EfficiencyModel& model,
                                   double price, double gamma_star, double max_power);

/// clamp(zeta/c - 1/a, 0, P_max).
PowerResponse best_response_log_priced(double own_gain, double weight, double price, double max_power);

/// clamp(target/a - b/(2 c a^2), 0, P_max).
PowerResponse best_response_sir_cost(double own_gain, double power_weight, double sir_weight, double target,
                                     double max_power);

/// Overloads that take the full power vector and the SIR model.
PowerResponse best_response_bpj(Eigen::Index k, const Eigen::VectorXd& powers, const SirModel& sir_model,
                                double gamma_star, double max_power);
PowerResponse best_response_priced(Eigen::Index k, const Eigen::VectorXd& powers, const SirModel& sir_model,
                                   double rate_bps, const EfficiencyModel& model, double price,
                                   double gamma_star, double max_power);

// ---------------------------------------------------------------------------
// Closed-form SIR-balanced equilibrium under the 1/N matched-filter model.

struct BalancedEquilibrium {
  enum class Status { Interior, CapConstrained, Infeasible };
  Status status = Status::Infeasible;
  /// Common received power q = p_k h_k (meaningless when Infeasible).
  double received_power = 0.0;
  /// q / h_k; may exceed P_max when CapConstrained.
  Eigen::VectorXd powers;
};

/// Imposes gamma_k = gamma* for all k: q = gamma* noise / (1 - (K-1) gamma*/N).
BalancedEquilibrium sir_balanced_ne_mf(const Eigen::VectorXd& gains, int processing_gain, double noise_power,
                                       double gamma_star, double max_power);

// ---------------------------------------------------------------------------
// Two-player matrix games.

struct MatrixGame {
  std::array<std::vector<std::string>, 2> actions;
  Eigen::MatrixXd row_payoff;  // indexed (row action, column action)
  Eigen::MatrixXd col_payoff;

  /// Actions {C, NC}: (C,C) = (-1,-1), (NC,NC) = (0,0), (C,NC) = (1,-2), (NC,C) = (-2,1).
  static MatrixGame prisoners_dilemma();
  static MatrixGame matching_pennies();

  void validate() const;
};

struct JointAction {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  friend bool operator==(const JointAction&, const JointAction&) = default;
};

/// Every joint action from which neither player gains by deviating alone.
std::vector<JointAction> pure_nash_matrix(const MatrixGame& game);

}  // namespace eepc
