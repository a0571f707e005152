#include "eepc/multicarrier.hpp"

#include <limits>

#include "eepc/errors.hpp"
#include "eepc/sir_model.hpp"

namespace eepc {

namespace {

// Carrier choice given the interference-plus-noise seen on each carrier.
BestResponse choose_carrier(const Eigen::RowVectorXd& interference, const Eigen::RowVectorXd& gains,
                            double gamma_star, double max_power, const EfficiencyModel& model) {
  const Eigen::Index carriers = gains.size();
  Eigen::Index best = -1;
  double best_power = std::numeric_limits<double>::infinity();
  Eigen::Index fallback = 0;
  double fallback_eff = -1.0;
  for (Eigen::Index l = 0; l < carriers; ++l) {
    const double required = gamma_star * interference(l) / gains(l);
    if (required <= max_power && required < best_power) {
      best_power = required;
      best = l;
    }
    const double eff = model.eval(max_power * gains(l) / interference(l));
    if (eff > fallback_eff) {
      fallback_eff = eff;
      fallback = l;
    }
  }
  BestResponse r{Eigen::RowVectorXd::Zero(carriers), best < 0};
  if (best >= 0) {
    r.powers(best) = best_power;
  } else {
    r.powers(fallback) = max_power;
  }
  return r;
}

class McSession final : public GameSession {
 public:
  McSession(const MulticarrierGame& game, const Eigen::MatrixXd& powers) : game_(game) { reset(powers); }

  void reset(const Eigen::MatrixXd& powers) override {
    received_ = powers.cwiseProduct(game_.gains());
    totals_ = received_.colwise().sum();
  }

  BestResponse respond(Eigen::Index k) override {
    const Eigen::RowVectorXd interference =
        ((totals_ - received_.row(k)) / game_.processing_gain()).array() + game_.noise_power();
    return choose_carrier(interference, game_.gains().row(k), game_.gamma_star(), game_.max_power(),
                          game_.efficiency());
  }

  void commit(Eigen::Index k, const Eigen::RowVectorXd& row) override {
    const Eigen::RowVectorXd q = row.cwiseProduct(game_.gains().row(k));
    totals_ += q - received_.row(k);
    received_.row(k) = q;
  }

 private:
  const MulticarrierGame& game_;
  Eigen::MatrixXd received_;
  Eigen::RowVectorXd totals_;
};

}  // namespace

std::vector<std::vector<Eigen::Index>> support_of(const Eigen::MatrixXd& powers) {
  std::vector<std::vector<Eigen::Index>> support(static_cast<std::size_t>(powers.rows()));
  for (Eigen::Index k = 0; k < powers.rows(); ++k)
    for (Eigen::Index l = 0; l < powers.cols(); ++l)
      if (powers(k, l) > 0.0) support[static_cast<std::size_t>(k)].push_back(l);
  return support;
}

double utility_mc(double rate_bps, const Eigen::RowVectorXd& sirs, const Eigen::RowVectorXd& powers,
                  const EfficiencyModel& model) {
  if (sirs.size() != powers.size()) throw DimensionError("utility_mc: one SIR per carrier");
  const double spent = powers.sum();
  if (spent <= 0.0) return 0.0;
  double throughput = 0.0;
  for (Eigen::Index l = 0; l < sirs.size(); ++l) throughput += rate_bps * model.eval(sirs(l));
  return throughput / spent;
}

Eigen::MatrixXd sir_mc(const Eigen::MatrixXd& powers, const Eigen::MatrixXd& gains, int processing_gain,
                       double noise_power) {
  if (powers.rows() != gains.rows() || powers.cols() != gains.cols()) {
    throw DimensionError("sir_mc: powers and gains must both be users x carriers");
  }
  Eigen::MatrixXd sir(powers.rows(), powers.cols());
  for (Eigen::Index l = 0; l < powers.cols(); ++l) {
    sir.col(l) = sir_mf(powers.col(l), gains.col(l), processing_gain, noise_power);
  }
  return sir;
}

BestResponse best_response_mc(Eigen::Index k, const Eigen::MatrixXd& powers, const Eigen::MatrixXd& gains,
                              int processing_gain, double noise_power, double gamma_star, double max_power,
                              const EfficiencyModel& model) {
  if (powers.rows() != gains.rows() || powers.cols() != gains.cols()) {
    throw DimensionError("best_response_mc: powers and gains must both be users x carriers");
  }
  const Eigen::MatrixXd received = powers.cwiseProduct(gains);
  const Eigen::RowVectorXd interference =
      ((received.colwise().sum() - received.row(k)) / processing_gain).array() + noise_power;
  return choose_carrier(interference, gains.row(k), gamma_star, max_power, model);
}

MulticarrierGame::MulticarrierGame(Eigen::MatrixXd gains, Eigen::VectorXd rates, int processing_gain,
                                   double noise_power, double max_power, EfficiencyModel efficiency)
    : gains_(std::move(gains)),
      rates_(std::move(rates)),
      processing_gain_(processing_gain),
      noise_(noise_power),
      max_power_(max_power),
      efficiency_(std::move(efficiency)),
      gamma_star_(eepc::gamma_star(efficiency_)) {
  if (gains_.rows() < 1 || gains_.cols() < 1) throw DimensionError("multicarrier: need users and carriers");
  if (rates_.size() != gains_.rows()) throw DimensionError("multicarrier: one rate per user");
  if (!(gains_.array() > 0.0).all()) throw DomainError("multicarrier: gains must be positive");
  if (processing_gain_ < 1 || !(noise_ > 0.0) || !(max_power_ > 0.0)) {
    throw DomainError("multicarrier: N, noise and P_max must be positive");
  }
}

std::unique_ptr<GameSession> MulticarrierGame::open(const Eigen::MatrixXd& powers) const {
  return std::make_unique<McSession>(*this, powers);
}

Eigen::MatrixXd MulticarrierGame::sirs(const Eigen::MatrixXd& powers) const {
  return sir_mc(powers, gains_, processing_gain_, noise_);
}

Eigen::VectorXd MulticarrierGame::efficiencies(const Eigen::MatrixXd& powers) const {
  const Eigen::MatrixXd sir = sirs(powers);
  Eigen::VectorXd u(users());
  for (Eigen::Index k = 0; k < users(); ++k) u(k) = utility_mc(rates_(k), sir.row(k), powers.row(k), efficiency_);
  return u;
}

std::function<double(const Eigen::RowVectorXd&)> MulticarrierGame::unilateral_payoff(
    Eigen::Index k, const Eigen::MatrixXd& powers) const {
  // SIR on carrier l is linear in p_kl with slope h_kl / I_kl.
  Eigen::RowVectorXd slope(carriers());
  for (Eigen::Index l = 0; l < carriers(); ++l) {
    const double others = powers.col(l).dot(gains_.col(l)) - powers(k, l) * gains_(k, l);
    slope(l) = gains_(k, l) / (noise_ + others / processing_gain_);
  }
  return [this, k, slope](const Eigen::RowVectorXd& row) {
    return utility_mc(rates_(k), row.cwiseProduct(slope), row, efficiency_);
  };
}

McReport run_mc_game(const MulticarrierGame& game, const IterateOptions& options) {
  McReport out;
  out.report = iterate(game, Eigen::MatrixXd::Zero(game.users(), game.carriers()), options);
  out.carrier_counts.assign(static_cast<std::size_t>(game.carriers()), 0);
  out.single_carrier_support = true;
  for (const auto& active : support_of(out.report.state.powers)) {
    if (active.size() == 1) {
      ++out.carrier_counts[static_cast<std::size_t>(active.front())];
    } else {
      out.single_carrier_support = false;
    }
  }
  return out;
}

McAllocation independent_per_carrier_baseline(const MulticarrierGame& game, const IterateOptions& options) {
  McAllocation out;
  out.powers.resize(game.users(), game.carriers());
  for (Eigen::Index l = 0; l < game.carriers(); ++l) {
    auto model = std::make_shared<ProcessingGainMf>(game.gains().col(l), game.processing_gain(), game.noise_power());
    const PowerGame carrier(model, BitsPerJoule{}, game.rates(), game.efficiency(), game.max_power());
    const auto report = iterate(carrier, Eigen::MatrixXd::Zero(game.users(), 1), options);
    out.powers.col(l) = report.state.powers.col(0);
  }
  out.sirs = game.sirs(out.powers);
  out.support = support_of(out.powers);
  return out;
}

double total_utility_mc(const MulticarrierGame& game, const Eigen::MatrixXd& powers) {
  return game.efficiencies(powers).sum();
}

}  // namespace eepc
