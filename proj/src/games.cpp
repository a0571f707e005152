#include "eepc/games.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_size(const Eigen::VectorXd& v, Eigen::Index users, const char* what) {
  if (v.size() != users) throw DomainError(std::string(what) + ": expected one entry per user");
}

void require_nonnegative(const Eigen::VectorXd& v, const char* what) {
  if (!(v.array() >= 0.0).all()) throw DomainError(std::string(what) + " must be nonnegative");
}

constexpr double kGolden = 0.6180339887498949;

}  // namespace

std::string objective_name(const Objective& objective) {
  return std::visit(Overloaded{[](const BitsPerJoule&) { return std::string("bpj"); },
                               [](const PricedBitsPerJoule&) { return std::string("priced"); },
                               [](const LogPriced&) { return std::string("log-priced"); },
                               [](const SirTrackingCost&) { return std::string("sir-cost"); }},
                    objective);
}

void validate(const Objective& objective, Eigen::Index users) {
  std::visit(Overloaded{[](const BitsPerJoule&) {},
                        [&](const PricedBitsPerJoule& o) {
                          require_size(o.price, users, "price");
                          require_nonnegative(o.price, "price");
                        },
                        [&](const LogPriced& o) {
                          require_size(o.weight, users, "log weight");
                          require_size(o.price, users, "price");
                          if (!(o.weight.array() > 0.0).all()) throw DomainError("log weight must be positive");
                          if (!(o.price.array() > 0.0).all()) throw DomainError("log-priced price must be positive");
                        },
                        [&](const SirTrackingCost& o) {
                          require_size(o.power_weight, users, "power weight");
                          require_size(o.sir_weight, users, "sir weight");
                          require_size(o.target, users, "target sir");
                          require_nonnegative(o.power_weight, "power weight");
                          if (!(o.sir_weight.array() > 0.0).all()) throw DomainError("sir weight must be positive");
                          if (!(o.target.array() > 0.0).all()) throw DomainError("target sir must be positive");
                        }},
             objective);
}

double utility_bpj(double rate_bps, double sir, double power, const EfficiencyModel& model) {
  if (power <= 0.0) return 0.0;
  return rate_bps * model.eval(sir) / power;
}

double payoff(const Objective& objective, Eigen::Index k, double rate_bps, const EfficiencyModel& model,
              double sir, double power) {
  return std::visit(
      Overloaded{[&](const BitsPerJoule&) { return utility_bpj(rate_bps, sir, power, model); },
                 [&](const PricedBitsPerJoule& o) {
                   return utility_bpj(rate_bps, sir, power, model) - o.price(k) * power;
                 },
                 [&](const LogPriced& o) { return o.weight(k) * std::log1p(sir) - o.price(k) * power; },
                 [&](const SirTrackingCost& o) {
                   const double miss = o.target(k) - sir;
                   return -(o.power_weight(k) * power + o.sir_weight(k) * miss * miss);
                 }},
      objective);
}

PowerResponse best_response_bpj(double own_gain, double gamma_star, double max_power) {
  if (!(own_gain > 0.0)) throw DomainError("best response: own gain must be positive");
  const double required = gamma_star / own_gain;
  if (required > max_power) return {max_power, true};
  return {required, false};
}

PowerResponse best_response_priced(double own_gain, double rate_bps, const EfficiencyModel& model, double price,
                                   double gamma_star, double max_power) {
  const PowerResponse unpriced = best_response_bpj(own_gain, gamma_star, max_power);
  if (price <= 0.0) return unpriced;
  const double upper = unpriced.power;
  auto net = [&](double p) { return rate_bps * model.eval(own_gain * p) / p - price * p; };

  // The net utility need not be unimodal near zero, so bracket the best
  // basin on a coarse grid before the golden-section refinement.
  constexpr int kScan = 256;
  int best = 1;
  double best_value = net(upper / kScan);
  for (int i = 2; i <= kScan; ++i) {
    const double v = net(upper * i / kScan);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = upper * (best - 1) / kScan;
  double hi = upper * std::min(best + 1, kScan) / kScan;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = net(std::max(x1, 1e-300)), f2 = net(x2);
  while (hi - lo > 1e-10 * hi) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = net(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = net(std::max(x1, 1e-300));
    }
  }
  double power = 0.5 * (lo + hi);
  // Net utility is flat to rounding near the maximizer, which leaves the
  // golden-section answer jittering around sqrt(eps). Its slope is still
  // resolvable there, so finish on the sign of the slope.
  auto slope = [&](double p) {
    const double g = own_gain * p;
    return rate_bps * (g * model.derivative(g) - model.eval(g)) / (p * p) - price;
  };
  double a = power * (1.0 - 1e-6), b = std::min(upper, power * (1.0 + 1e-6));
  if (a > 0.0 && slope(a) > 0.0 && slope(b) < 0.0) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (slope(mid) > 0.0 ? a : b) = mid;
    }
    power = 0.5 * (a + b);
  } else if (net(upper) >= net(power)) {
    // The right end of the search interval is a candidate in its own right.
    power = upper;
  }
  if (!(net(power) > 0.0)) return {0.0, false};
  return {power, unpriced.saturated && power == upper};
}

PowerResponse best_response_log_priced(double own_gain, double weight, double price, double max_power) {
  if (!(own_gain > 0.0)) throw DomainError("best response: own gain must be positive");
  if (!(price > 0.0)) return {max_power, true};
  const double stationary = weight / price - 1.0 / own_gain;
  if (stationary > max_power) return {max_power, true};
  return {std::max(0.0, stationary), false};
}

PowerResponse best_response_sir_cost(double own_gain, double power_weight, double sir_weight, double target,
                                     double max_power) {
  if (!(own_gain > 0.0)) throw DomainError("best response: own gain must be positive");
  if (!(sir_weight > 0.0)) throw DomainError("best response: sir weight must be positive");
  const double stationary = target / own_gain - power_weight / (2.0 * sir_weight * own_gain * own_gain);
  if (stationary > max_power) return {max_power, true};
  return {std::max(0.0, stationary), false};
}

PowerResponse best_response_bpj(Eigen::Index k, const Eigen::VectorXd& powers, const SirModel& sir_model,
                                double gamma_star, double max_power) {
  return best_response_bpj(sir_model.own_gain(k, powers), gamma_star, max_power);
}

PowerResponse best_response_priced(Eigen::Index k, const Eigen::VectorXd& powers, const SirModel& sir_model,
                                   double rate_bps, const EfficiencyModel& model, double price,
                                   double gamma_star, double max_power) {
  return best_response_priced(sir_model.own_gain(k, powers), rate_bps, model, price, gamma_star, max_power);
}

BalancedEquilibrium sir_balanced_ne_mf(const Eigen::VectorXd& gains, int processing_gain, double noise_power,
                                       double gamma_star, double max_power) {
  BalancedEquilibrium out;
  const auto users = static_cast<double>(gains.size());
  const double margin = 1.0 - (users - 1.0) * gamma_star / processing_gain;
  if (!(margin > 0.0)) {
    out.status = BalancedEquilibrium::Status::Infeasible;
    return out;
  }
  out.received_power = gamma_star * noise_power / margin;
  out.powers = gains.cwiseInverse() * out.received_power;
  out.status = (out.powers.array() <= max_power).all() ? BalancedEquilibrium::Status::Interior
                                                         : BalancedEquilibrium::Status::CapConstrained;
  return out;
}

MatrixGame MatrixGame::prisoners_dilemma() {
  MatrixGame g;
  g.actions = {std::vector<std::string>{"C", "NC"}, std::vector<std::string>{"C", "NC"}};
  g.row_payoff.resize(2, 2);
  g.col_payoff.resize(2, 2);
  g.row_payoff << -1, 1,
                  -2, 0;
  g.col_payoff << -1, -2,
                   1, 0;
  return g;
}

MatrixGame MatrixGame::matching_pennies() {
  MatrixGame g;
  g.actions = {std::vector<std::string>{"Heads", "Tails"}, std::vector<std::string>{"Heads", "Tails"}};
  g.row_payoff.resize(2, 2);
  g.row_payoff << 1, -1,
                 -1, 1;
  g.col_payoff = -g.row_payoff;
  return g;
}

void MatrixGame::validate() const {
  const auto rows = static_cast<Eigen::Index>(actions[0].size());
  const auto cols = static_cast<Eigen::Index>(actions[1].size());
  if (rows == 0 || cols == 0) throw DomainError("matrix game: each player needs an action");
  if (row_payoff.rows() != rows || row_payoff.cols() != cols || col_payoff.rows() != rows ||
      col_payoff.cols() != cols) {
    throw DomainError("matrix game: payoff table must cover every joint action");
  }
}

std::vector<JointAction> pure_nash_matrix(const MatrixGame& game) {
  game.validate();
  std::vector<JointAction> equilibria;
  for (Eigen::Index r = 0; r < game.row_payoff.rows(); ++r) {
    for (Eigen::Index c = 0; c < game.row_payoff.cols(); ++c) {
      const bool row_best = game.row_payoff(r, c) >= game.row_payoff.col(c).maxCoeff();
      const bool col_best = game.col_payoff(r, c) >= game.col_payoff.row(r).maxCoeff();
      if (row_best && col_best) equilibria.push_back({r, c});
    }
  }
  return equilibria;
}

}  // namespace eepc
