#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "eepc/efficiency.hpp"
#include "eepc/games.hpp"
#include "eepc/sir_model.hpp"

namespace eepc {

struct BestResponse {
  Eigen::RowVectorXd powers;
  bool saturated = false;
};

/// Mutable per-run view of a game; one per iterate() call, never shared.
class GameSession {
 public:
  virtual ~GameSession() = default;
  virtual void reset(const Eigen::MatrixXd& powers) = 0;
  virtual BestResponse respond(Eigen::Index k) = 0;
  virtual void commit(Eigen::Index k, const Eigen::RowVectorXd& row) = 0;
};

/// A non-cooperative power game over K users and D carriers with strategy
/// sets [0, P_max]^D. Implementations are immutable and thread-safe.
class Game {
 public:
  virtual ~Game() = default;

  virtual Eigen::Index users() const = 0;
  virtual Eigen::Index carriers() const = 0;
  virtual double max_power() const = 0;

  virtual std::unique_ptr<GameSession> open(const Eigen::MatrixXd& powers) const = 0;

  /// K x D output SIRs.
  virtual Eigen::MatrixXd sirs(const Eigen::MatrixXd& powers) const = 0;
  /// Energy efficiency (bits/joule) of every user, whatever the objective.
  virtual Eigen::VectorXd efficiencies(const Eigen::MatrixXd& powers) const = 0;
  /// What each user maximizes.
  virtual Eigen::VectorXd payoffs(const Eigen::MatrixXd& powers) const = 0;

  /// Payoff of user k as a function of its own row, others held at `powers`.
  virtual std::function<double(const Eigen::RowVectorXd&)> unilateral_payoff(
      Eigen::Index k, const Eigen::MatrixXd& powers) const = 0;

  BestResponse best_response(Eigen::Index k, const Eigen::MatrixXd& powers) const;
};

/// Single-carrier game: any SIR model linear in own power plus an objective.
class PowerGame final : public Game {
 public:
  PowerGame(std::shared_ptr<const SirModel> sir_model, Objective objective, Eigen::VectorXd rates,
            EfficiencyModel efficiency, double max_power);

  Eigen::Index users() const override { return sir_model_->users(); }
  Eigen::Index carriers() const override { return 1; }
  double max_power() const override { return max_power_; }

  std::unique_ptr<GameSession> open(const Eigen::MatrixXd& powers) const override;
  Eigen::MatrixXd sirs(const Eigen::MatrixXd& powers) const override;
  Eigen::VectorXd efficiencies(const Eigen::MatrixXd& powers) const override;
  Eigen::VectorXd payoffs(const Eigen::MatrixXd& powers) const override;
  std::function<double(const Eigen::RowVectorXd&)> unilateral_payoff(
      Eigen::Index k, const Eigen::MatrixXd& powers) const override;

  PowerResponse respond(Eigen::Index k, double own_gain) const;

  const SirModel& sir_model() const { return *sir_model_; }
  const Objective& objective() const { return objective_; }
  const EfficiencyModel& efficiency() const { return efficiency_; }
  const Eigen::VectorXd& rates() const { return rates_; }
  /// Throws NoInteriorMaximizer if the efficiency model has none.
  double gamma_star() const;

 private:
  std::shared_ptr<const SirModel> sir_model_;
  Objective objective_;
  Eigen::VectorXd rates_;
  EfficiencyModel efficiency_;
  double max_power_;
  std::optional<double> gamma_star_;
};

enum class Schedule { GaussSeidel, Jacobi };

enum class EquilibriumStatus { Converged, InfeasibleAllMaxPower, CycleDetected, MaxIterations };

std::string_view to_string(EquilibriumStatus status);
std::string_view to_string(Schedule schedule);

struct IterateOptions {
  Schedule schedule = Schedule::GaussSeidel;
  /// Stop when max |delta p| < tol * P_max.
  double tol = 1e-9;
  long max_iters = 100000;
  /// Consecutive all-saturated sweeps before declaring infeasibility.
  int saturation_sweeps = 3;
};

struct GameState {
  Eigen::MatrixXd powers;
  Eigen::MatrixXd sirs;
  Eigen::VectorXd efficiencies;
  Eigen::VectorXd payoffs;
};

GameState evaluate(const Game& game, const Eigen::MatrixXd& powers);

struct EquilibriumReport {
  GameState state;
  long iterations = 0;
  EquilibriumStatus status = EquilibriumStatus::MaxIterations;
  bool ne_verified = false;
  double worst_deviation_gain = 0.0;
};

/// Best-response dynamics. Gauss-Seidel updates users in index order with
/// each update visible to the next; Jacobi updates all users from the same
/// iterate. A revisited power matrix (quantized to min(1e-12, tol/4) P_max)
/// ends the run as a cycle.
EquilibriumReport iterate(const Game& game, const Eigen::MatrixXd& initial, const IterateOptions& options = {});

struct NashCheck {
  bool is_nash = false;
  double worst_gain = 0.0;  // relative to max(|payoff|, tiny)
  Eigen::Index worst_user = -1;
};

/// Samples unilateral deviations: a grid of `grid_points` levels per carrier
/// over [0, P_max]^D plus each user's own best response. A deviation counts
/// when it beats the current payoff by more than tol relative.
NashCheck verify_nash(const Game& game, const Eigen::MatrixXd& powers, int grid_points = 101, double tol = 1e-9);

/// Fills ne_verified and worst_deviation_gain.
void verify_report(const Game& game, EquilibriumReport& report, int grid_points = 101, double tol = 1e-9);

/// Deviation check for a two-player matrix game.
NashCheck verify_nash(const MatrixGame& game, const JointAction& action, double tol = 0.0);

}  // namespace eepc
