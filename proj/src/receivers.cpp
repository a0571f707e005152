#include "eepc/receivers.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace eepc {

std::string_view to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::MF: return "mf";
    case ReceiverKind::DE: return "de";
    case ReceiverKind::MMSE: return "mmse";
  }
  return "?";
}

ReceiverKind parse_receiver(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "mf") return ReceiverKind::MF;
  if (lower == "de") return ReceiverKind::DE;
  if (lower == "mmse") return ReceiverKind::MMSE;
  throw DomainError("unknown receiver '" + std::string(name) + "' (expected mf, de or mmse)");
}

double large_system_load_limit(ReceiverKind kind, int antennas, double gamma_star) {
  switch (kind) {
    case ReceiverKind::MF: return antennas / gamma_star;
    case ReceiverKind::DE: return 1.0;
    case ReceiverKind::MMSE: return antennas * (1.0 + 1.0 / gamma_star);
  }
  return 0.0;
}

double large_system_gamma_bar(ReceiverKind kind, const LargeSystemPoint& point, double gamma_star) {
  if (!(point.load > 0.0) || point.antennas < 1) throw DomainError("large system: load and antennas must be positive");
  if (!(gamma_star > 0.0)) throw DomainError("large system: gamma* must be positive");
  const double limit = large_system_load_limit(kind, point.antennas, gamma_star);
  if (!(point.load < limit)) {
    throw CapacityExceeded("load beyond receiver capacity: " + std::string(to_string(kind)) +
                               " supports alpha < " + std::to_string(limit),
                           limit);
  }
  const double effective = point.effective_load();
  switch (kind) {
    case ReceiverKind::MF: return 1.0 - effective * gamma_star;
    case ReceiverKind::DE: return 1.0 - point.load;
    case ReceiverKind::MMSE: return 1.0 - effective * gamma_star / (1.0 + gamma_star);
  }
  return 0.0;
}

double large_system_utility(double rate_bps, double combined_gain, double noise_power, double gamma_star,
                            double f_at_gamma_star, ReceiverKind kind, const LargeSystemPoint& point) {
  const double gamma_bar = large_system_gamma_bar(kind, point, gamma_star);
  return rate_bps * f_at_gamma_star * combined_gain / (gamma_star * noise_power) * gamma_bar;
}

double large_system_utility(const UserProfile& user, const SystemParams& params, double gamma_star,
                            double f_at_gamma_star, ReceiverKind kind, double load) {
  return large_system_utility(user.rate_bps, user.combined_gain(), params.noise_power, gamma_star,
                              f_at_gamma_star, kind, LargeSystemPoint{load, params.rx_antennas});
}

}  // namespace eepc
