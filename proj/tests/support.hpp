#pragma once

// Hand-rolled generators and independent reference computations shared by
// the unit tests and the acceptance runner. Nothing here calls into the
// library's solvers.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace eepc::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  Eigen::MatrixXd binary_signatures(Eigen::Index n, Eigen::Index k) {
    Eigen::MatrixXd s(n, k);
    const double chip = 1.0 / std::sqrt(static_cast<double>(n));
    std::bernoulli_distribution coin(0.5);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < n; ++i) s(i, j) = coin(engine_) ? chip : -chip;
    return s;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Plain bisection on e^g - 1 - M g over (lo, hi) with the sign change
/// located first; the positive root for M > 1.
inline double exp_root(int m) {
  auto g = [m](double x) { return std::expm1(x) - m * x; };
  double lo = 1e-3, hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double psr(double sir, int m) { return std::pow(-std::expm1(-sir), m); }

/// Argmax of `f` over n uniform points on [lo, hi].
inline double grid_argmax(const std::function<double(double)>& f, double lo, double hi, int n) {
  double best_x = lo, best = -INFINITY;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

/// SINR of user k behind the explicitly formed MMSE filter c = A_k^-1 s_k,
/// evaluated as (c's_k)^2 q_k / c' A_k c.
inline double mmse_filter_sinr(const Eigen::MatrixXd& s, const Eigen::VectorXd& received, double noise,
                               Eigen::Index k) {
  const Eigen::Index n = s.rows();
  Eigen::MatrixXd a = noise * Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    if (j != k) a += received(j) * s.col(j) * s.col(j).transpose();
  const Eigen::VectorXd c = a.fullPivLu().solve(s.col(k));
  const double signal = c.dot(s.col(k));
  return received(k) * signal * signal / c.dot(a * c);
}

/// Fixed point of p_k <- gamma* (noise + (1/N) sum_{j != k} p_j h_j) / h_k,
/// iterated Jacobi-style to a relative change below 1e-15.
inline Eigen::VectorXd balanced_fixed_point(const Eigen::VectorXd& h, int n, double noise, double target) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(h.size());
  for (int it = 0; it < 1000000; ++it) {
    const double total = p.dot(h);
    Eigen::VectorXd next(h.size());
    for (Eigen::Index k = 0; k < h.size(); ++k) next(k) = target * (noise + (total - p(k) * h(k)) / n) / h(k);
    const double change = (next - p).cwiseAbs().maxCoeff();
    p = next;
    if (change <= 1e-15 * p.cwiseAbs().maxCoeff()) break;
  }
  return p;
}

/// Counts pure equilibria of the two-carrier matched-filter game (1/N model)
/// by trying every carrier assignment. Users on carrier l sit at the common
/// received power gamma* noise / (1 - (K_l - 1) gamma*/N); an assignment is an
/// equilibrium when every such power fits under P_max and no user needs less
/// power to reach gamma* on the other carrier. Equilibria with saturated
/// users are not counted.
inline int two_carrier_equilibria(const Eigen::MatrixXd& h, int n, double noise, double target, double pmax) {
  const int users = static_cast<int>(h.rows());
  int count = 0;
  for (std::uint32_t mask = 0; mask < (1u << users); ++mask) {
    int on[2] = {0, 0};
    for (int k = 0; k < users; ++k) ++on[(mask >> k) & 1u];
    double q[2];
    bool ok = true;
    for (int l = 0; l < 2 && ok; ++l) {
      const double margin = 1.0 - (on[l] - 1) * target / n;
      ok = margin > 0.0;
      q[l] = target * noise / margin;
    }
    for (int k = 0; k < users && ok; ++k) {
      const int l = static_cast<int>((mask >> k) & 1u), other = 1 - l;
      const double p = q[l] / h(k, l);
      const double alternative = target * (noise + on[other] * q[other] / n) / h(k, other);
      ok = p <= pmax && alternative >= p;
    }
    count += ok ? 1 : 0;
  }
  return count;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace eepc::testing
