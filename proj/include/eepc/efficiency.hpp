#pragma once

#include <memory>
#include <vector>

namespace eepc {

/// Packet success rate f(gamma) as a function of the output SIR.
///
/// Two forms are supported: the closed form (1 - exp(-gamma))^M, and a
/// user-supplied table that is interpolated with monotone (Fritsch-Carlson)
/// cubic Hermite segments and held constant past its last knot. Both satisfy
/// f(0) = 0 and 0 <= f <= 1. The model is immutable after construction.
class EfficiencyModel {
 public:
  enum class Form { ExpM, Tabulated };

  /// f(gamma) = (1 - e^-gamma)^M with M = packet_size_bits.
  static EfficiencyModel exp_m(int packet_size_bits = 100);

  /// Table must start at (0, 0), have strictly increasing abscissae and
  /// nondecreasing values in [0, 1] that end at 1.
  static EfficiencyModel tabulated(std::vector<double> gammas,
                                   std::vector<double> values,
                                   int packet_size_bits);

  Form form() const noexcept { return form_; }
  int packet_size_bits() const noexcept { return packet_size_; }

  double eval(double gamma) const;
  double operator()(double gamma) const { return eval(gamma); }

  /// f'(gamma). Analytic for exp-m; for tables a central difference with
  /// step kDerivativeStep * max(1, gamma), one-sided near zero.
  double derivative(double gamma) const;

  /// gamma f'(gamma) / f(gamma); +inf where f vanishes.
  double elasticity(double gamma) const;

  static constexpr double kDerivativeStep = 1e-6;

 private:
  struct Table {
    std::vector<double> x, y, slope;
  };

  EfficiencyModel(Form form, int packet_size, std::shared_ptr<const Table> table)
      : form_(form), packet_size_(packet_size), table_(std::move(table)) {}

  double eval_table(double gamma) const;

  Form form_;
  int packet_size_;
  std::shared_ptr<const Table> table_;
};

/// Unique positive root of f(g) = g f'(g), the SIR that maximizes f(g)/p for
/// an SIR linear in p. Bisection on the elasticity with an expanding upper
/// bracket, run to machine precision (well inside 1e-10 absolute).
/// Throws NoInteriorMaximizer when f has no such root (e.g. concave f).
double gamma_star(const EfficiencyModel& model);

}  // namespace eepc
