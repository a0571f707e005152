#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "eepc/errors.hpp"
#include "eepc/system.hpp"

namespace eepc {

/// Linear uplink receivers, ordered MF < DE < MMSE for reporting.
enum class ReceiverKind { MF = 0, DE = 1, MMSE = 2 };

std::string_view to_string(ReceiverKind kind);
/// Accepts "mf", "de", "mmse" (any case). Throws DomainError otherwise.
ReceiverKind parse_receiver(std::string_view name);

/// Output SIR of a matched filter under the processing-gain interference
/// model: gamma_k = p_k h_k / (noise + (1/N) sum_{j != k} p_j h_j).
template <typename DerivedP, typename DerivedH>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, 1> sir_mf(
    const Eigen::MatrixBase<DerivedP>& powers, const Eigen::MatrixBase<DerivedH>& gains,
    int processing_gain, typename DerivedP::Scalar noise) {
  using Scalar = typename DerivedP::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (powers.size() != gains.size()) throw DimensionError("sir_mf: powers and gains differ in length");
  const Vector received = powers.cwiseProduct(gains);
  const Scalar total = received.sum();
  const Scalar inv_n = Scalar(1) / Scalar(processing_gain);
  Vector sir(received.size());
  for (Eigen::Index k = 0; k < received.size(); ++k) {
    sir(k) = received(k) / (noise + inv_n * (total - received(k)));
  }
  return sir;
}

/// Output SIRs of the MF, decorrelator or linear MMSE receiver for users
/// with signatures `spreading` (columns, unit norm).
///
///   MF:   q_k (s_k's_k)^2 / (noise + sum_{j != k} q_j (s_k's_j)^2)
///   DE:   q_k / (noise [(S'S)^-1]_kk), S must have full column rank
///   MMSE: q_k s_k' A_k^-1 s_k, A_k = noise I + sum_{j != k} q_j s_j s_j'
///
/// with q = p .* h. The MMSE value is obtained from one factorization of the
/// full covariance A through t_k = s_k' A^-1 s_k, gamma_k = q_k t_k / (1 - q_k t_k).
template <typename DerivedP, typename DerivedH, typename DerivedS>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, 1> sir_linear(
    const Eigen::MatrixBase<DerivedP>& powers, const Eigen::MatrixBase<DerivedH>& gains,
    const Eigen::MatrixBase<DerivedS>& spreading, typename DerivedP::Scalar noise, ReceiverKind kind) {
  using Scalar = typename DerivedP::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index users = powers.size();
  if (gains.size() != users || spreading.cols() != users) {
    throw DimensionError("sir_linear: need one gain and one sequence per user");
  }
  const Vector received = powers.cwiseProduct(gains);
  Vector sir(users);

  switch (kind) {
    case ReceiverKind::MF: {
      const Matrix gram = spreading.transpose() * spreading;
      const Matrix cross = gram.cwiseAbs2();
      const Vector interference = cross * received;
      for (Eigen::Index k = 0; k < users; ++k) {
        const Scalar own = cross(k, k) * received(k);
        sir(k) = own / (noise + interference(k) - own);
      }
      break;
    }
    case ReceiverKind::DE: {
      const Matrix gram = spreading.transpose() * spreading;
      Eigen::LDLT<Matrix> ldlt(gram);
      const auto pivots = ldlt.vectorD();
      if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > Scalar(1e-10) * pivots.maxCoeff()) ||
          ldlt.rcond() < Scalar(1e-12)) {
        throw SingularityError("sir_linear: decorrelator needs full-rank signatures (K <= N)");
      }
      const Matrix inverse = ldlt.solve(Matrix::Identity(users, users));
      for (Eigen::Index k = 0; k < users; ++k) sir(k) = received(k) / (noise * inverse(k, k));
      break;
    }
    case ReceiverKind::MMSE: {
      const Eigen::Index n = spreading.rows();
      Matrix covariance = Matrix::Identity(n, n) * noise;
      covariance.noalias() += spreading * received.asDiagonal() * spreading.transpose();
      Eigen::LLT<Matrix> llt(covariance);
      const Matrix whitened = llt.solve(Matrix(spreading));
      for (Eigen::Index k = 0; k < users; ++k) {
        const Scalar t = spreading.col(k).dot(whitened.col(k));
        const Scalar qt = received(k) * t;
        sir(k) = qt / (Scalar(1) - qt);
      }
      break;
    }
  }
  return sir;
}

/// Large-system operating point: load alpha = K/N and m receive antennas.
struct LargeSystemPoint {
  double load = 0.0;
  int antennas = 1;
  double effective_load() const { return load / antennas; }
};

/// Load at which the receiver can no longer support gamma* for every user:
/// MF m/gamma*, DE 1, MMSE m (1 + 1/gamma*).
double large_system_load_limit(ReceiverKind kind, int antennas, double gamma_star);

/// Interference-suppression factor Gamma-bar at the SIR-balanced equilibrium:
/// MF 1 - a gamma*, DE 1 - alpha, MMSE 1 - a gamma*/(1 + gamma*), a = alpha/m.
/// Throws CapacityExceeded (carrying the load threshold) outside the region.
double large_system_gamma_bar(ReceiverKind kind, const LargeSystemPoint& point, double gamma_star);

/// Equilibrium utility R f(gamma*) h_bar / (gamma* noise) * Gamma-bar, bits/joule.
double large_system_utility(double rate_bps, double combined_gain, double noise_power, double gamma_star,
                            double f_at_gamma_star, ReceiverKind kind, const LargeSystemPoint& point);

double large_system_utility(const UserProfile& user, const SystemParams& params, double gamma_star,
                            double f_at_gamma_star, ReceiverKind kind, double load);

}  // namespace eepc
