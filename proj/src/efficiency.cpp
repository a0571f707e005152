#include "eepc/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eepc/errors.hpp"

namespace eepc {

namespace {

void require_nonnegative(double gamma) {
  if (!(gamma >= 0.0)) {
    throw DomainError("efficiency: gamma must be nonnegative, got " + std::to_string(gamma));
  }
}

}  // namespace

EfficiencyModel EfficiencyModel::exp_m(int packet_size_bits) {
  if (packet_size_bits < 1) throw DomainError("efficiency: packet size must be positive");
  return EfficiencyModel(Form::ExpM, packet_size_bits, nullptr);
}

EfficiencyModel EfficiencyModel::tabulated(std::vector<double> gammas,
                                           std::vector<double> values,
                                           int packet_size_bits) {
  if (packet_size_bits < 1) throw DomainError("efficiency: packet size must be positive");
  if (gammas.size() != values.size() || gammas.size() < 3) {
    throw DomainError("efficiency: table needs at least 3 matching (gamma, f) pairs");
  }
  if (gammas.front() != 0.0 || values.front() != 0.0) {
    throw DomainError("efficiency: table must start at f(0) = 0");
  }
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    if (!(gammas[i] > gammas[i - 1])) throw DomainError("efficiency: gammas must increase");
    if (values[i] < values[i - 1]) throw DomainError("efficiency: f must be nondecreasing");
  }
  if (values.back() > 1.0 || values.back() < 1.0 - 1e-6) {
    throw DomainError("efficiency: table must saturate at f = 1");
  }

  // Fritsch-Carlson slopes keep each Hermite segment monotone.
  const std::size_t n = gammas.size();
  std::vector<double> secant(n - 1), slope(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    secant[i] = (values[i + 1] - values[i]) / (gammas[i + 1] - gammas[i]);
  }
  // Three-point end slopes, limited so the end segments stay monotone and
  // keep the curvature of the data next to them.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    const double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
    return d;
  };
  slope[0] = end_slope(gammas[1] - gammas[0], gammas[2] - gammas[1], secant[0], secant[1]);
  slope[n - 1] = end_slope(gammas[n - 1] - gammas[n - 2], gammas[n - 2] - gammas[n - 3], secant[n - 2], secant[n - 3]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope[i] = (secant[i - 1] * secant[i] <= 0.0) ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      slope[i] = slope[i + 1] = 0.0;
      continue;
    }
    const double a = slope[i] / secant[i];
    const double b = slope[i + 1] / secant[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      slope[i] = t * a * secant[i];
      slope[i + 1] = t * b * secant[i];
    }
  }
  auto table = std::make_shared<Table>(Table{std::move(gammas), std::move(values), std::move(slope)});
  return EfficiencyModel(Form::Tabulated, packet_size_bits, std::move(table));
}

double EfficiencyModel::eval_table(double gamma) const {
  const auto& t = *table_;
  if (gamma >= t.x.back()) return t.y.back();
  const auto it = std::upper_bound(t.x.begin(), t.x.end(), gamma);
  const std::size_t i = static_cast<std::size_t>(it - t.x.begin()) - 1;
  const double h = t.x[i + 1] - t.x[i];
  const double s = (gamma - t.x[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double v = h00 * t.y[i] + h10 * h * t.slope[i] + h01 * t.y[i + 1] + h11 * h * t.slope[i + 1];
  return std::clamp(v, 0.0, 1.0);
}

double EfficiencyModel::eval(double gamma) const {
  require_nonnegative(gamma);
  if (form_ == Form::Tabulated) return eval_table(gamma);
  if (std::isinf(gamma)) return 1.0;
  return std::pow(-std::expm1(-gamma), packet_size_);
}

double EfficiencyModel::derivative(double gamma) const {
  require_nonnegative(gamma);
  if (form_ == Form::ExpM) {
    if (std::isinf(gamma)) return 0.0;
    const double m = packet_size_;
    return m * std::pow(-std::expm1(-gamma), packet_size_ - 1) * std::exp(-gamma);
  }
  const double h = kDerivativeStep * std::max(1.0, gamma);
  if (gamma < h) return (eval_table(gamma + h) - eval_table(gamma)) / h;
  return (eval_table(gamma + h) - eval_table(gamma - h)) / (2 * h);
}

double EfficiencyModel::elasticity(double gamma) const {
  require_nonnegative(gamma);
  if (form_ == Form::ExpM) {
    if (gamma == 0.0) return packet_size_;
    // gamma f'/f = M gamma e^-g / (1 - e^-g) = M gamma / expm1(gamma)
    return packet_size_ * gamma / std::expm1(gamma);
  }
  const double f = eval_table(gamma);
  if (f <= 0.0) return std::numeric_limits<double>::infinity();
  return gamma * derivative(gamma) / f;
}

double gamma_star(const EfficiencyModel& model) {
  // Below gamma* the elasticity exceeds one (convex part), above it drops below.
  auto above = [&](double g) { return model.elasticity(g) > 1.0; };

  double lo = 1.0;
  while (!above(lo)) {
    lo *= 0.5;
    if (lo < 1e-12) throw NoInteriorMaximizer();
  }
  double hi = 2.0 * lo;
  while (above(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw NoInteriorMaximizer();
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace eepc
