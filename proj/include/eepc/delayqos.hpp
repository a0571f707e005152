#pragma once

#include <Eigen/Dense>
#include <vector>

namespace eepc {

/// Traffic and delay requirement of one delay-sensitive user.
struct QosProfile {
  int packet_size_bits = 100;
  double arrival_rate_pps = 0.0;  // Poisson packet arrivals
  double delay_bound_s = 0.01;    // bound on mean packet delay (queueing + retransmissions)

  void validate() const;
};

/// Smallest transmission rate (bps) meeting the delay bound with equality
/// when the user operates at gamma*:
///   (M/D) [1 + D lambda + sqrt(1 + D^2 lambda^2 + 2 (1 - f*) D lambda)] / (2 f*).
double omega_star(const QosProfile& profile, double f_at_gamma_star);

/// Fraction of the shared resource the user occupies: 1 / (1 + B / (omega gamma*)).
double user_size(double omega_bps, double gamma_star, double bandwidth_hz);

/// sum(sizes) < 1.
bool feasible(const std::vector<double>& sizes);

/// Largest K with K * size < 1 for identical users.
int capacity(double size);

/// Per-user energy efficiency at the Pareto-dominant equilibrium:
///   (B h f* / (noise gamma*)) (1 - sum_i Phi_i) / (1 - Phi_user).
/// Throws InfeasibleError when the sizes are infeasible.
double ne_utility_delay(std::size_t user, const std::vector<double>& sizes, double gain, double bandwidth_hz,
                        double noise_power, double f_at_gamma_star, double gamma_star);

/// Solves the K x K linear system
///   (B/R_k) p_k h_k / (noise + sum_{j != k} p_j h_j) = gamma*   for all k
/// directly and returns the transmit powers. Throws InfeasibleError when the
/// system is singular or the solution is not strictly positive.
Eigen::VectorXd solve_delay_powers(const Eigen::VectorXd& gains, const Eigen::VectorXd& rates, double bandwidth_hz,
                                   double noise_power, double gamma_star);

}  // namespace eepc
