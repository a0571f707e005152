#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eepc/efficiency.hpp"
#include "eepc/system.hpp"

namespace eepc {

/// Malformed scenario file; the message names the field path or line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-user parameters of the alternative objectives.
struct ObjectiveWeights {
  double log_weight = 1.0;  // zeta_k
  double sir_weight = 1.0;  // c_k in the SIR-tracking cost
  double target_sir = 0.0;  // 0 selects gamma*
};

struct Scenario {
  SystemParams system;
  std::vector<UserProfile> users;  // gains populated after load
  std::vector<ObjectiveWeights> weights;
  std::uint64_t seed = 1;
  ChannelConfig channel;
  SpreadingMode spreading = SpreadingMode::RandomBinary;
  EfficiencyModel efficiency = EfficiencyModel::exp_m(100);
};

/// Parses the scenario JSON and generates channel gains from its seed.
///
/// Schema:
///   { "system": { bandwidth_hz, processing_gain, noise_power, max_power,
///                 carriers, rx_antennas, common_rate_bps },
///     "users": [ { distance_m | gains, rate_bps, arrival_rate_pps,
///                  delay_bound_s, pricing_factor,
///                  log_weight, sir_weight, target_sir, id } ],
///     "seed": 1, "channel_model": "path-loss-only" | "rayleigh",
///     "path_loss_constant": 0.097, "path_loss_exponent": 4,
///     "spreading": "random-binary" | "orthogonal",
///     "efficiency": { "form": "exp-m", "packet_size_bits": 100 } }
///
/// `gains` is a number (one carrier, one antenna), a list over carriers, or
/// a carriers x antennas nested list. Missing system fields take defaults;
/// unknown keys are rejected.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Stream-separated seed derived from a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace eepc
