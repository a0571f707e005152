#include "eepc/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double number(const json& object, const char* key, double fallback, const std::string& where) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& object, const char* key, int fallback, const std::string& where) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text(const json& object, const char* key, const std::string& fallback, const std::string& where) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

Eigen::MatrixXd parse_gains(const json& v, const SystemParams& system, const std::string& where) {
  Eigen::MatrixXd g(system.carriers, system.rx_antennas);
  auto scalar = [&](const json& x, const std::string& at) {
    if (!x.is_number()) throw ConfigError(at + ": expected a number");
    return x.get<double>();
  };
  if (v.is_number()) {
    if (system.carriers != 1 || system.rx_antennas != 1) {
      throw ConfigError(where + ": scalar gain needs carriers = rx_antennas = 1");
    }
    g(0, 0) = v.get<double>();
    return g;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != system.carriers) {
    throw ConfigError(where + ": expected one entry per carrier");
  }
  for (int c = 0; c < system.carriers; ++c) {
    const auto& row = v[static_cast<std::size_t>(c)];
    const std::string at = where + "[" + std::to_string(c) + "]";
    if (row.is_number()) {
      if (system.rx_antennas != 1) throw ConfigError(at + ": expected one gain per antenna");
      g(c, 0) = row.get<double>();
      continue;
    }
    if (!row.is_array() || static_cast<int>(row.size()) != system.rx_antennas) {
      throw ConfigError(at + ": expected one gain per antenna");
    }
    for (int a = 0; a < system.rx_antennas; ++a) {
      g(c, a) = scalar(row[static_cast<std::size_t>(a)], at + "[" + std::to_string(a) + "]");
    }
  }
  return g;
}

EfficiencyModel parse_efficiency(const json& v) {
  const std::string where = "efficiency";
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  reject_unknown(v, {"form", "packet_size_bits", "gammas", "values"}, where);
  const std::string form = text(v, "form", "exp-m", where);
  const int m = integer(v, "packet_size_bits", 100, where);
  if (form == "exp-m") return EfficiencyModel::exp_m(m);
  if (form == "tabulated") {
    if (!v.contains("gammas") || !v.contains("values")) throw ConfigError(where + ": tabulated form needs gammas and values");
    return EfficiencyModel::tabulated(v.at("gammas").get<std::vector<double>>(), v.at("values").get<std::vector<double>>(), m);
  }
  throw ConfigError(where + ".form: expected 'exp-m' or 'tabulated'");
}

int line_of(const std::string& textual, std::size_t byte) {
  const auto end = textual.begin() + static_cast<std::ptrdiff_t>(std::min(byte, textual.size()));
  return 1 + static_cast<int>(std::count(textual.begin(), end, '\n'));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(json_text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario: top level must be an object");
  reject_unknown(root, {"system", "users", "seed", "channel_model", "path_loss_constant", "path_loss_exponent",
                        "spreading", "efficiency"},
                 "scenario");

  Scenario s;
  try {
    if (root.contains("system")) {
      const auto& sys = root.at("system");
      const std::string where = "system";
      if (!sys.is_object()) throw ConfigError("system: expected an object");
      reject_unknown(sys, {"bandwidth_hz", "processing_gain", "noise_power", "max_power", "carriers", "rx_antennas",
                           "common_rate_bps"},
                     where);
      s.system.bandwidth_hz = number(sys, "bandwidth_hz", s.system.bandwidth_hz, where);
      s.system.processing_gain = integer(sys, "processing_gain", s.system.processing_gain, where);
      s.system.noise_power = number(sys, "noise_power", s.system.noise_power, where);
      s.system.max_power = number(sys, "max_power", s.system.max_power, where);
      s.system.carriers = integer(sys, "carriers", s.system.carriers, where);
      s.system.rx_antennas = integer(sys, "rx_antennas", s.system.rx_antennas, where);
      s.system.common_rate_bps = number(sys, "common_rate_bps", s.system.common_rate_bps, where);
    }
    try {
      s.system.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }

    if (root.contains("seed")) {
      if (!root.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
      s.seed = root.at("seed").get<std::uint64_t>();
    }
    const std::string channel = text(root, "channel_model", "path-loss-only", "scenario");
    if (channel == "path-loss-only") {
      s.channel.model = ChannelModel::PathLossOnly;
    } else if (channel == "rayleigh") {
      s.channel.model = ChannelModel::Rayleigh;
    } else {
      throw ConfigError("channel_model: expected 'path-loss-only' or 'rayleigh'");
    }
    s.channel.path_loss_constant = number(root, "path_loss_constant", s.channel.path_loss_constant, "scenario");
    s.channel.path_loss_exponent = number(root, "path_loss_exponent", s.channel.path_loss_exponent, "scenario");
    const std::string spreading = text(root, "spreading", "random-binary", "scenario");
    if (spreading == "random-binary") {
      s.spreading = SpreadingMode::RandomBinary;
    } else if (spreading == "orthogonal") {
      s.spreading = SpreadingMode::Orthogonal;
    } else {
      throw ConfigError("spreading: expected 'random-binary' or 'orthogonal'");
    }
    if (root.contains("efficiency")) s.efficiency = parse_efficiency(root.at("efficiency"));

    if (!root.contains("users") || !root.at("users").is_array() || root.at("users").empty()) {
      throw ConfigError("users: expected a nonempty array");
    }
    const auto& users = root.at("users");
    for (std::size_t i = 0; i < users.size(); ++i) {
      const std::string where = "users[" + std::to_string(i) + "]";
      const auto& u = users[i];
      if (!u.is_object()) throw ConfigError(where + ": expected an object");
      reject_unknown(u, {"id", "distance_m", "gains", "rate_bps", "arrival_rate_pps", "delay_bound_s",
                         "pricing_factor", "log_weight", "sir_weight", "target_sir"},
                     where);
      UserProfile p;
      p.id = integer(u, "id", static_cast<int>(i), where);
      const bool has_distance = u.contains("distance_m");
      const bool has_gains = u.contains("gains");
      if (has_distance == has_gains) throw ConfigError(where + ": give exactly one of distance_m or gains");
      if (has_distance) p.distance_m = number(u, "distance_m", 0.0, where);
      if (has_gains) p.gains = parse_gains(u.at("gains"), s.system, where + ".gains");
      p.rate_bps = number(u, "rate_bps", s.system.common_rate_bps, where);
      p.arrival_rate_pps = number(u, "arrival_rate_pps", 0.0, where);
      if (u.contains("delay_bound_s")) p.delay_bound_s = number(u, "delay_bound_s", 0.0, where);
      p.pricing_factor = number(u, "pricing_factor", 0.0, where);
      try {
        p.validate();
      } catch (const DomainError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      ObjectiveWeights w;
      w.log_weight = number(u, "log_weight", w.log_weight, where);
      w.sir_weight = number(u, "sir_weight", w.sir_weight, where);
      w.target_sir = number(u, "target_sir", w.target_sir, where);
      s.users.push_back(std::move(p));
      s.weights.push_back(w);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }

  s.users = generate_gains(derive_seed(s.seed, 0), std::move(s.users), s.system, s.channel);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace eepc
