#include "eepc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

class PowerGameSession final : public GameSession {
 public:
  PowerGameSession(const PowerGame& game, const Eigen::MatrixXd& powers)
      : game_(game), tracker_(game.sir_model().tracker(powers.col(0))) {}

  void reset(const Eigen::MatrixXd& powers) override { tracker_->reset(powers.col(0)); }

  BestResponse respond(Eigen::Index k) override {
    const PowerResponse r = game_.respond(k, tracker_->own_gain(k));
    return {Eigen::RowVectorXd::Constant(1, r.power), r.saturated};
  }

  void commit(Eigen::Index k, const Eigen::RowVectorXd& row) override { tracker_->set_power(k, row(0)); }

 private:
  const PowerGame& game_;
  std::unique_ptr<GainTracker> tracker_;
};

std::uint64_t hash_state(const std::vector<std::int64_t>& q) {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : q) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return h;
}

std::vector<std::int64_t> quantize(const Eigen::MatrixXd& powers, double quantum) {
  std::vector<std::int64_t> q(static_cast<std::size_t>(powers.size()));
  for (Eigen::Index i = 0; i < powers.size(); ++i) {
    q[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::llround(powers(i) / quantum));
  }
  return q;
}

}  // namespace

BestResponse Game::best_response(Eigen::Index k, const Eigen::MatrixXd& powers) const {
  return open(powers)->respond(k);
}

PowerGame::PowerGame(std::shared_ptr<const SirModel> sir_model, Objective objective, Eigen::VectorXd rates,
                     EfficiencyModel efficiency, double max_power)
    : sir_model_(std::move(sir_model)),
      objective_(std::move(objective)),
      rates_(std::move(rates)),
      efficiency_(std::move(efficiency)),
      max_power_(max_power) {
  if (!sir_model_) throw DomainError("power game: missing SIR model");
  if (!(max_power_ > 0.0)) throw DomainError("power game: P_max must be positive");
  if (rates_.size() != sir_model_->users()) throw DimensionError("power game: one rate per user");
  validate(objective_, users());
  const bool needs_target = std::holds_alternative<BitsPerJoule>(objective_) ||
                            std::holds_alternative<PricedBitsPerJoule>(objective_);
  if (needs_target) gamma_star_ = eepc::gamma_star(efficiency_);
}

double PowerGame::gamma_star() const {
  if (gamma_star_) return *gamma_star_;
  return eepc::gamma_star(efficiency_);
}

PowerResponse PowerGame::respond(Eigen::Index k, double own_gain) const {
  return std::visit(
      Overloaded{[&](const BitsPerJoule&) { return best_response_bpj(own_gain, *gamma_star_, max_power_); },
                 [&](const PricedBitsPerJoule& o) {
                   return best_response_priced(own_gain, rates_(k), efficiency_, o.price(k), *gamma_star_,
                                               max_power_);
                 },
                 [&](const LogPriced& o) {
                   return best_response_log_priced(own_gain, o.weight(k), o.price(k), max_power_);
                 },
                 [&](const SirTrackingCost& o) {
                   return best_response_sir_cost(own_gain, o.power_weight(k), o.sir_weight(k), o.target(k),
                                                 max_power_);
                 }},
      objective_);
}

std::unique_ptr<GameSession> PowerGame::open(const Eigen::MatrixXd& powers) const {
  return std::make_unique<PowerGameSession>(*this, powers);
}

Eigen::MatrixXd PowerGame::sirs(const Eigen::MatrixXd& powers) const { return sir_model_->sirs(powers.col(0)); }

Eigen::VectorXd PowerGame::efficiencies(const Eigen::MatrixXd& powers) const {
  const Eigen::VectorXd sir = sir_model_->sirs(powers.col(0));
  Eigen::VectorXd u(users());
  for (Eigen::Index k = 0; k < users(); ++k) u(k) = utility_bpj(rates_(k), sir(k), powers(k, 0), efficiency_);
  return u;
}

Eigen::VectorXd PowerGame::payoffs(const Eigen::MatrixXd& powers) const {
  const Eigen::VectorXd sir = sir_model_->sirs(powers.col(0));
  Eigen::VectorXd u(users());
  for (Eigen::Index k = 0; k < users(); ++k) {
    u(k) = payoff(objective_, k, rates_(k), efficiency_, sir(k), powers(k, 0));
  }
  return u;
}

std::function<double(const Eigen::RowVectorXd&)> PowerGame::unilateral_payoff(
    Eigen::Index k, const Eigen::MatrixXd& powers) const {
  const double a = sir_model_->own_gain(k, powers.col(0));
  return [this, k, a](const Eigen::RowVectorXd& row) {
    return payoff(objective_, k, rates_(k), efficiency_, a * row(0), row(0));
  };
}

std::string_view to_string(EquilibriumStatus status) {
  switch (status) {
    case EquilibriumStatus::Converged: return "converged";
    case EquilibriumStatus::InfeasibleAllMaxPower: return "infeasible-all-max-power";
    case EquilibriumStatus::CycleDetected: return "cycle-detected";
    case EquilibriumStatus::MaxIterations: return "max-iterations";
  }
  return "?";
}

std::string_view to_string(Schedule schedule) {
  return schedule == Schedule::GaussSeidel ? "gauss-seidel" : "jacobi";
}

GameState evaluate(const Game& game, const Eigen::MatrixXd& powers) {
  return GameState{powers, game.sirs(powers), game.efficiencies(powers), game.payoffs(powers)};
}

EquilibriumReport iterate(const Game& game, const Eigen::MatrixXd& initial, const IterateOptions& options) {
  const Eigen::Index users = game.users();
  const Eigen::Index carriers = game.carriers();
  const double p_max = game.max_power();
  if (initial.rows() != users || initial.cols() != carriers) {
    throw DimensionError("iterate: initial powers must be users x carriers");
  }
  if (!(options.tol > 0.0) || options.max_iters < 1) throw DomainError("iterate: tol and max_iters must be positive");

  Eigen::MatrixXd powers = initial.cwiseMax(0.0).cwiseMin(p_max);
  const double quantum = std::min(1e-12, options.tol / 4.0) * p_max;

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  std::vector<std::vector<std::int64_t>> history;
  auto remember = [&](const Eigen::MatrixXd& p) {
    auto q = quantize(p, quantum);
    const auto h = hash_state(q);
    auto& bucket = seen[h];
    for (auto idx : bucket) {
      if (history[idx] == q) return true;
    }
    bucket.push_back(history.size());
    history.push_back(std::move(q));
    return false;
  };
  remember(powers);

  auto session = game.open(powers);
  EquilibriumReport report;
  int saturated_streak = 0;
  Eigen::MatrixXd next(users, carriers);
  std::vector<BestResponse> responses(static_cast<std::size_t>(users));

  for (long sweep = 1; sweep <= options.max_iters; ++sweep) {
    session->reset(powers);
    bool all_saturated = true;
    if (options.schedule == Schedule::GaussSeidel) {
      next = powers;
      for (Eigen::Index k = 0; k < users; ++k) {
        BestResponse r = session->respond(k);
        next.row(k) = r.powers;
        session->commit(k, r.powers);
        all_saturated = all_saturated && r.saturated;
      }
    } else {
      for (Eigen::Index k = 0; k < users; ++k) responses[static_cast<std::size_t>(k)] = session->respond(k);
      for (Eigen::Index k = 0; k < users; ++k) {
        const auto& r = responses[static_cast<std::size_t>(k)];
        next.row(k) = r.powers;
        all_saturated = all_saturated && r.saturated;
      }
    }

    const double delta = (next - powers).cwiseAbs().maxCoeff();
    powers = next;
    report.iterations = sweep;
    saturated_streak = all_saturated ? saturated_streak + 1 : 0;

    if (saturated_streak >= options.saturation_sweeps) {
      report.status = EquilibriumStatus::InfeasibleAllMaxPower;
      break;
    }
    if (delta < options.tol * p_max && !all_saturated) {
      report.status = EquilibriumStatus::Converged;
      break;
    }
    if (delta >= options.tol * p_max && remember(powers)) {
      report.status = EquilibriumStatus::CycleDetected;
      break;
    }
  }
  report.state = evaluate(game, powers);
  return report;
}

NashCheck verify_nash(const Game& game, const Eigen::MatrixXd& powers, int grid_points, double tol) {
  if (grid_points < 2) throw DomainError("verify_nash: need at least two grid points");
  const Eigen::Index carriers = game.carriers();
  const double p_max = game.max_power();
  auto session = game.open(powers);

  NashCheck check;
  check.is_nash = true;
  check.worst_gain = -std::numeric_limits<double>::infinity();

  std::vector<int> index(static_cast<std::size_t>(carriers));
  Eigen::RowVectorXd row(carriers);
  for (Eigen::Index k = 0; k < game.users(); ++k) {
    const auto value = game.unilateral_payoff(k, powers);
    const double current = value(powers.row(k));
    const double scale = std::max(std::abs(current), 1e-300);
    double best = value(session->respond(k).powers);

    // Enumerate the grid^D lattice with an odometer.
    std::fill(index.begin(), index.end(), 0);
    while (true) {
      for (Eigen::Index d = 0; d < carriers; ++d) {
        row(d) = p_max * index[static_cast<std::size_t>(d)] / (grid_points - 1);
      }
      best = std::max(best, value(row));
      Eigen::Index d = 0;
      while (d < carriers && ++index[static_cast<std::size_t>(d)] == grid_points) {
        index[static_cast<std::size_t>(d)] = 0;
        ++d;
      }
      if (d == carriers) break;
    }

    const double gain = (best - current) / scale;
    if (gain > check.worst_gain) {
      check.worst_gain = gain;
      check.worst_user = k;
    }
    if (gain > tol) check.is_nash = false;
  }
  return check;
}

void verify_report(const Game& game, EquilibriumReport& report, int grid_points, double tol) {
  const NashCheck check = verify_nash(game, report.state.powers, grid_points, tol);
  report.ne_verified = check.is_nash;
  report.worst_deviation_gain = check.worst_gain;
}

NashCheck verify_nash(const MatrixGame& game, const JointAction& action, double tol) {
  game.validate();
  const double row_current = game.row_payoff(action.row, action.col);
  const double col_current = game.col_payoff(action.row, action.col);
  const double row_gain = game.row_payoff.col(action.col).maxCoeff() - row_current;
  const double col_gain = game.col_payoff.row(action.row).maxCoeff() - col_current;
  NashCheck check;
  check.worst_gain = std::max(row_gain, col_gain);
  check.worst_user = row_gain >= col_gain ? 0 : 1;
  check.is_nash = check.worst_gain <= tol;
  return check;
}

}  // namespace eepc
