#include "eepc/delayqos.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "eepc/errors.hpp"

namespace eepc {

void QosProfile::validate() const {
  if (packet_size_bits < 1) throw DomainError("qos: packet size must be positive");
  if (!(arrival_rate_pps >= 0.0)) throw DomainError("qos: arrival rate must be nonnegative");
  if (!(delay_bound_s > 0.0)) throw DomainError("qos: delay bound must be positive");
}

double omega_star(const QosProfile& profile, double f_at_gamma_star) {
  profile.validate();
  if (!(f_at_gamma_star > 0.0 && f_at_gamma_star <= 1.0)) throw DomainError("qos: f(gamma*) must lie in (0, 1]");
  const double m = profile.packet_size_bits;
  const double d = profile.delay_bound_s;
  const double load = d * profile.arrival_rate_pps;
  const double root = std::sqrt(1.0 + load * load + 2.0 * (1.0 - f_at_gamma_star) * load);
  return (m / d) * (1.0 + load + root) / (2.0 * f_at_gamma_star);
}

double user_size(double omega_bps, double gamma_star, double bandwidth_hz) {
  if (!(omega_bps > 0.0) || !(bandwidth_hz > 0.0) || !(gamma_star > 0.0)) {
    throw DomainError("user_size: rate, gamma* and bandwidth must be positive");
  }
  return 1.0 / (1.0 + bandwidth_hz / (omega_bps * gamma_star));
}

bool feasible(const std::vector<double>& sizes) {
  return std::accumulate(sizes.begin(), sizes.end(), 0.0) < 1.0;
}

int capacity(double size) {
  if (!(size > 0.0 && size < 1.0)) throw DomainError("capacity: size must lie in (0, 1)");
  int k = static_cast<int>(std::floor(1.0 / size));
  while (k > 0 && !(k * size < 1.0)) --k;
  while ((k + 1) * size < 1.0) ++k;
  return k;
}

double ne_utility_delay(std::size_t user, const std::vector<double>& sizes, double gain, double bandwidth_hz,
                        double noise_power, double f_at_gamma_star, double gamma_star) {
  if (user >= sizes.size()) throw DomainError("ne_utility_delay: user index out of range");
  if (!feasible(sizes)) throw InfeasibleError("ne_utility_delay: sizes sum to 1 or more");
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  const double scale = bandwidth_hz * gain * f_at_gamma_star / (noise_power * gamma_star);
  return scale * (1.0 - total) / (1.0 - sizes[user]);
}

Eigen::VectorXd solve_delay_powers(const Eigen::VectorXd& gains, const Eigen::VectorXd& rates, double bandwidth_hz,
                                   double noise_power, double gamma_star) {
  const Eigen::Index users = gains.size();
  if (rates.size() != users || users == 0) throw DimensionError("solve_delay_powers: one rate per user");
  // Unknowns are received powers q = p .* h:
  //   (B/(R_k gamma*)) q_k - sum_{j != k} q_j = noise
  Eigen::MatrixXd system = -Eigen::MatrixXd::Ones(users, users);
  for (Eigen::Index k = 0; k < users; ++k) system(k, k) = bandwidth_hz / (rates(k) * gamma_star);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw InfeasibleError("solve_delay_powers: singular system (sizes sum to 1)");
  const Eigen::VectorXd received = lu.solve(Eigen::VectorXd::Constant(users, noise_power));
  if (!received.allFinite() || !(received.array() > 0.0).all()) {
    throw InfeasibleError("solve_delay_powers: no positive power solution");
  }
  return received.cwiseQuotient(gains);
}

}  // namespace eepc
