#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "eepc/dynamics.hpp"
#include "eepc/efficiency.hpp"
#include "eepc/multicarrier.hpp"
#include "eepc/receivers.hpp"
#include "eepc/scenario.hpp"

namespace eepc {

// ---------------------------------------------------------------------------
// Single scenario equilibrium

/// "mf" is the 1/N matched-filter model; "mf-corr", "de" and "mmse" use the
/// scenario's signature sequences (generated from derive_seed(seed, 1)).
std::shared_ptr<const SirModel> make_sir_model(const Scenario& scenario, const std::string& receiver);

/// "bpj", "priced", "log-priced" or "sir-cost", built from the per-user
/// pricing factors and objective weights of the scenario.
Objective make_objective(const Scenario& scenario, const std::string& objective);

struct EquilibriumRun {
  EquilibriumReport report;
  std::string receiver;
  std::string objective;
};

/// Runs best-response dynamics from all-zero powers on the first carrier
/// and, when verify_grid > 0, checks the final state for profitable deviations.
EquilibriumRun run_equilibrium(const Scenario& scenario, const std::string& receiver, const std::string& objective,
                               const IterateOptions& options, int verify_grid = 0);

// ---------------------------------------------------------------------------
// Utility versus load (one and two receive antennas)

struct SweepLoadConfig {
  double alpha_start = 0.05;
  double alpha_stop = 1.5;
  double alpha_step = 0.05;
  std::vector<ReceiverKind> receivers{ReceiverKind::MF, ReceiverKind::DE, ReceiverKind::MMSE};
  std::vector<int> antennas{1, 2};
  int trials = 20;
  int processing_gain = 128;
  std::uint64_t base_seed = 1;
  int packet_size_bits = 100;
  double distance_m = 100.0;
  double noise_power = 5e-16;
  double rate_bps = 1e4;
  double max_power = 1.0;
  ChannelConfig channel{ChannelModel::Rayleigh};
  IterateOptions iterate{Schedule::GaussSeidel, 1e-9, 100000, 3};
};

struct SweepLoadRow {
  double alpha = 0.0;
  ReceiverKind receiver = ReceiverKind::MF;
  int antennas = 1;
  int users = 0;
  /// Equilibrium utility at the mean channel gain; NaN past the load limit.
  double utility_large_system = std::numeric_limits<double>::quiet_NaN();
  /// Mean and standard error over converged finite-system trials (m = 1 only).
  double utility_finite_mean = std::numeric_limits<double>::quiet_NaN();
  double utility_finite_stderr = std::numeric_limits<double>::quiet_NaN();
  int converged_trials = 0;
  int trials = 0;
  bool feasible = false;
};

struct FiniteTrial {
  EquilibriumStatus status = EquilibriumStatus::MaxIterations;
  /// Mean bits/joule over users at the final state.
  double mean_utility = 0.0;
  /// Max |gamma_k / gamma* - 1| at the final state.
  double sir_spread = 0.0;
};

/// One finite-system trial: K = round(alpha N) users at the configured
/// distance with random-binary signatures, bits-per-joule game from zero.
FiniteTrial finite_load_trial(const SweepLoadConfig& config, double alpha, ReceiverKind receiver, int trial);

std::vector<SweepLoadRow> sweep_load(const SweepLoadConfig& config);

// ---------------------------------------------------------------------------
// Joint versus per-carrier-independent multicarrier allocation

struct MulticarrierConfig {
  int users_start = 2;
  int users_stop = 40;
  int users_step = 2;
  int carriers = 2;
  int processing_gain = 128;
  int trials = 20;
  std::uint64_t base_seed = 1;
  int packet_size_bits = 100;
  double min_distance_m = 50.0;
  double max_distance_m = 150.0;
  double noise_power = 5e-16;
  double rate_bps = 1e4;
  double max_power = 1.0;
  ChannelConfig channel{ChannelModel::Rayleigh};
  IterateOptions iterate{Schedule::GaussSeidel, 1e-9, 100000, 3};
};

struct MulticarrierRow {
  int users = 0;
  int trial = 0;
  double total_utility_joint = 0.0;
  double total_utility_independent = 0.0;
  bool converged = false;
  EquilibriumStatus status = EquilibriumStatus::MaxIterations;
  bool single_carrier_support = false;
  std::vector<int> carrier_counts;
};

/// Users drawn uniformly in distance with i.i.d. fading per carrier; seed
/// base_seed + trial.
MulticarrierGame multicarrier_instance(const MulticarrierConfig& config, int users, int trial);

MulticarrierRow multicarrier_trial(const MulticarrierConfig& config, int users, int trial);

std::vector<MulticarrierRow> multicarrier_table(const MulticarrierConfig& config);

// ---------------------------------------------------------------------------
// Delay-constrained users: size, capacity, rate and goodput versus delay

struct DelayQosConfig {
  std::vector<double> source_rates_pps{10.0, 50.0, 100.0};
  /// Normalized delay D*B, log-spaced from start to stop.
  double delay_start = 1e4;
  double delay_stop = 1e7;
  int delay_points = 13;
  double bandwidth_hz = 5e6;
  int packet_size_bits = 100;
};

struct DelayQosRow {
  double normalized_delay = 0.0;
  double source_rate_pps = 0.0;
  double size_phi = 0.0;
  int capacity_k = 0;
  double omega_over_b = 0.0;
  double total_goodput_over_b = 0.0;
};

std::vector<DelayQosRow> delay_qos_table(const DelayQosConfig& config);

// ---------------------------------------------------------------------------

/// start, start + step, ... up to stop (inclusive within 1e-9 of a step).
std::vector<double> linear_range(double start, double stop, double step);
/// `points` log-spaced values from start to stop inclusive.
std::vector<double> log_range(double start, double stop, int points);

}  // namespace eepc
