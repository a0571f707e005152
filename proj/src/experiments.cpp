#include "eepc/experiments.hpp"

#include <cmath>

#include "eepc/delayqos.hpp"
#include "eepc/errors.hpp"
#include "eepc/random.hpp"

namespace eepc {

namespace {

constexpr std::uint64_t kGainStream = 0;
constexpr std::uint64_t kSpreadingStream = 1;
constexpr std::uint64_t kPlacementStream = 2;

}  // namespace

std::vector<double> linear_range(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || !(step > 0.0) || stop < start) {
    throw DomainError("range: need finite start <= stop and step > 0");
  }
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<double> log_range(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop >= start) || !std::isfinite(stop) || points < 1) {
    throw DomainError("log range: need 0 < start <= stop and at least one point");
  }
  if (points == 1) return {start};
  std::vector<double> out;
  // Interpolating the decimal exponent keeps decade points exact.
  const double lo = std::log10(start);
  const double hi = std::log10(stop);
  for (int i = 0; i < points; ++i) out.push_back(std::pow(10.0, lo + (hi - lo) * i / (points - 1)));
  out.front() = start;
  out.back() = stop;
  return out;
}

std::shared_ptr<const SirModel> make_sir_model(const Scenario& scenario, const std::string& receiver) {
  const Eigen::VectorXd gains = gain_matrix(scenario.users).col(0);
  const auto& sys = scenario.system;
  if (receiver == "mf") return std::make_shared<ProcessingGainMf>(gains, sys.processing_gain, sys.noise_power);
  const ReceiverKind kind = receiver == "mf-corr" ? ReceiverKind::MF : parse_receiver(receiver);
  auto spreading = generate_spreading(derive_seed(scenario.seed, kSpreadingStream), gains.size(), sys.processing_gain,
                                      scenario.spreading);
  return std::make_shared<LinearReceiverModel>(kind, gains, std::move(spreading), sys.noise_power);
}

Objective make_objective(const Scenario& scenario, const std::string& objective) {
  const auto users = static_cast<Eigen::Index>(scenario.users.size());
  Eigen::VectorXd price(users), log_weight(users), sir_weight(users), target(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    const auto i = static_cast<std::size_t>(k);
    price(k) = scenario.users[i].pricing_factor;
    log_weight(k) = scenario.weights[i].log_weight;
    sir_weight(k) = scenario.weights[i].sir_weight;
    target(k) = scenario.weights[i].target_sir;
  }
  if (objective == "bpj") return BitsPerJoule{};
  if (objective == "priced") return PricedBitsPerJoule{price};
  if (objective == "log-priced") return LogPriced{log_weight, price};
  if (objective == "sir-cost") {
    if ((target.array() <= 0.0).any()) {
      const double fallback = gamma_star(scenario.efficiency);
      target = (target.array() > 0.0).select(target, fallback);
    }
    return SirTrackingCost{price, sir_weight, target};
  }
  throw DomainError("unknown objective '" + objective + "' (expected bpj, priced, log-priced or sir-cost)");
}

EquilibriumRun run_equilibrium(const Scenario& scenario, const std::string& receiver, const std::string& objective,
                               const IterateOptions& options, int verify_grid) {
  const auto users = static_cast<Eigen::Index>(scenario.users.size());
  Eigen::VectorXd rates(users);
  for (Eigen::Index k = 0; k < users; ++k) rates(k) = scenario.users[static_cast<std::size_t>(k)].rate_bps;
  const PowerGame game(make_sir_model(scenario, receiver), make_objective(scenario, objective), rates,
                       scenario.efficiency, scenario.system.max_power);
  EquilibriumRun run{iterate(game, Eigen::MatrixXd::Zero(users, 1), options), receiver, objective};
  if (verify_grid > 0) verify_report(game, run.report, verify_grid);
  return run;
}

FiniteTrial finite_load_trial(const SweepLoadConfig& config, double alpha, ReceiverKind receiver, int trial) {
  const int users = std::max(1, static_cast<int>(std::lround(alpha * config.processing_gain)));
  const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(trial);

  SystemParams params;
  params.processing_gain = config.processing_gain;
  params.noise_power = config.noise_power;
  params.max_power = config.max_power;
  std::vector<UserProfile> profiles(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    profiles[static_cast<std::size_t>(k)].id = k;
    profiles[static_cast<std::size_t>(k)].distance_m = config.distance_m;
    profiles[static_cast<std::size_t>(k)].rate_bps = config.rate_bps;
  }
  profiles = generate_gains(derive_seed(seed, kGainStream), std::move(profiles), params, config.channel);
  const Eigen::VectorXd gains = gain_matrix(profiles).col(0);
  auto spreading = generate_spreading(derive_seed(seed, kSpreadingStream), users, config.processing_gain,
                                      SpreadingMode::RandomBinary);

  FiniteTrial out;
  std::shared_ptr<const SirModel> model;
  try {
    model = std::make_shared<LinearReceiverModel>(receiver, gains, std::move(spreading), config.noise_power);
  } catch (const SingularityError&) {
    out.status = EquilibriumStatus::InfeasibleAllMaxPower;
    return out;
  }
  const EfficiencyModel efficiency = EfficiencyModel::exp_m(config.packet_size_bits);
  const PowerGame game(model, BitsPerJoule{}, Eigen::VectorXd::Constant(users, config.rate_bps), efficiency,
                       config.max_power);
  const auto report = iterate(game, Eigen::MatrixXd::Zero(users, 1), config.iterate);
  out.status = report.status;
  out.mean_utility = report.state.efficiencies.mean();
  out.sir_spread = (report.state.sirs.col(0).array() / game.gamma_star() - 1.0).abs().maxCoeff();
  return out;
}

std::vector<SweepLoadRow> sweep_load(const SweepLoadConfig& config) {
  const EfficiencyModel efficiency = EfficiencyModel::exp_m(config.packet_size_bits);
  const double g_star = gamma_star(efficiency);
  const double f_star = efficiency.eval(g_star);
  const double mean_gain = config.channel.path_loss_constant *
                           std::pow(config.distance_m, -config.channel.path_loss_exponent);

  std::vector<SweepLoadRow> rows;
  for (double alpha : linear_range(config.alpha_start, config.alpha_stop, config.alpha_step)) {
    for (ReceiverKind receiver : config.receivers) {
      for (int m : config.antennas) {
        SweepLoadRow row;
        row.alpha = alpha;
        row.receiver = receiver;
        row.antennas = m;
        row.users = std::max(1, static_cast<int>(std::lround(alpha * config.processing_gain)));
        try {
          row.utility_large_system = large_system_utility(config.rate_bps, m * mean_gain, config.noise_power, g_star,
                                                          f_star, receiver, LargeSystemPoint{alpha, m});
          row.feasible = true;
        } catch (const CapacityExceeded&) {
          row.feasible = false;
        }
        if (m == 1 && config.trials > 0) {
          row.trials = config.trials;
          double sum = 0.0, sum_sq = 0.0;
          for (int t = 0; t < config.trials; ++t) {
            const FiniteTrial trial = finite_load_trial(config, alpha, receiver, t);
            if (trial.status != EquilibriumStatus::Converged) continue;
            ++row.converged_trials;
            sum += trial.mean_utility;
            sum_sq += trial.mean_utility * trial.mean_utility;
          }
          if (row.converged_trials > 0) {
            const double n = row.converged_trials;
            row.utility_finite_mean = sum / n;
            const double var = n > 1 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)) : 0.0;
            row.utility_finite_stderr = std::sqrt(var / n);
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

MulticarrierGame multicarrier_instance(const MulticarrierConfig& config, int users, int trial) {
  const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(trial);
  SystemParams params;
  params.processing_gain = config.processing_gain;
  params.noise_power = config.noise_power;
  params.max_power = config.max_power;
  params.carriers = config.carriers;
  Rng placement(derive_seed(seed, kPlacementStream));
  std::vector<UserProfile> profiles(static_cast<std::size_t>(users));
  for (int k = 0; k < users; ++k) {
    auto& p = profiles[static_cast<std::size_t>(k)];
    p.id = k;
    p.distance_m = placement.uniform(config.min_distance_m, config.max_distance_m);
    p.rate_bps = config.rate_bps;
  }
  profiles = generate_gains(derive_seed(seed, kGainStream), std::move(profiles), params, config.channel);
  return MulticarrierGame(gain_matrix(profiles), Eigen::VectorXd::Constant(users, config.rate_bps),
                          config.processing_gain, config.noise_power, config.max_power,
                          EfficiencyModel::exp_m(config.packet_size_bits));
}

MulticarrierRow multicarrier_trial(const MulticarrierConfig& config, int users, int trial) {
  const MulticarrierGame game = multicarrier_instance(config, users, trial);
  const McReport joint = run_mc_game(game, config.iterate);
  const McAllocation independent = independent_per_carrier_baseline(game, config.iterate);
  MulticarrierRow row;
  row.users = users;
  row.trial = trial;
  row.status = joint.report.status;
  row.converged = joint.report.status == EquilibriumStatus::Converged;
  row.single_carrier_support = joint.single_carrier_support;
  row.carrier_counts = joint.carrier_counts;
  row.total_utility_joint = joint.report.state.efficiencies.sum();
  row.total_utility_independent = total_utility_mc(game, independent.powers);
  return row;
}

std::vector<MulticarrierRow> multicarrier_table(const MulticarrierConfig& config) {
  if (config.users_start < 1 || config.users_step < 1 || config.users_stop < config.users_start) {
    throw DomainError("multicarrier: need 1 <= users start <= stop and a positive step");
  }
  std::vector<MulticarrierRow> rows;
  for (int k = config.users_start; k <= config.users_stop; k += config.users_step) {
    for (int t = 0; t < config.trials; ++t) rows.push_back(multicarrier_trial(config, k, t));
  }
  return rows;
}

std::vector<DelayQosRow> delay_qos_table(const DelayQosConfig& config) {
  const EfficiencyModel efficiency = EfficiencyModel::exp_m(config.packet_size_bits);
  const double g_star = gamma_star(efficiency);
  const double f_star = efficiency.eval(g_star);
  std::vector<DelayQosRow> rows;
  for (double rate : config.source_rates_pps) {
    for (double normalized : log_range(config.delay_start, config.delay_stop, config.delay_points)) {
      DelayQosRow row;
      row.normalized_delay = normalized;
      row.source_rate_pps = rate;
      const QosProfile profile{config.packet_size_bits, rate, normalized / config.bandwidth_hz};
      const double omega = omega_star(profile, f_star);
      row.size_phi = user_size(omega, g_star, config.bandwidth_hz);
      row.capacity_k = capacity(row.size_phi);
      row.omega_over_b = omega / config.bandwidth_hz;
      row.total_goodput_over_b = rate * config.packet_size_bits * row.capacity_k / config.bandwidth_hz;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace eepc
