#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "eepc/receivers.hpp"
#include "eepc/system.hpp"

namespace eepc {

/// Incremental view of an SIR model used inside one best-response sweep.
///
/// own_gain(k) is gamma_k / p_k given the current powers of every other user;
/// set_power(k, p) moves user k and updates whatever the model caches.
class GainTracker {
 public:
  virtual ~GainTracker() = default;
  virtual void reset(const Eigen::VectorXd& powers) = 0;
  virtual double own_gain(Eigen::Index k) = 0;
  virtual void set_power(Eigen::Index k, double power) = 0;
};

/// A single-carrier SIR model in which every user's SIR is linear in its own
/// transmit power: gamma_k = a_k(p_{-k}) p_k.
class SirModel {
 public:
  virtual ~SirModel() = default;

  virtual Eigen::Index users() const = 0;
  virtual Eigen::VectorXd sirs(const Eigen::VectorXd& powers) const = 0;

  /// a_k for the given powers of the other users (p_k itself is ignored).
  virtual double own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const;

  /// Default tracker recomputes own_gain from scratch on every call.
  virtual std::unique_ptr<GainTracker> tracker(const Eigen::VectorXd& powers) const;

  virtual std::string name() const = 0;
};

/// Matched filter under the 1/N interference model.
class ProcessingGainMf final : public SirModel {
 public:
  ProcessingGainMf(Eigen::VectorXd gains, int processing_gain, double noise_power);

  Eigen::Index users() const override { return gains_.size(); }
  Eigen::VectorXd sirs(const Eigen::VectorXd& powers) const override;
  double own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const override;
  std::unique_ptr<GainTracker> tracker(const Eigen::VectorXd& powers) const override;
  std::string name() const override { return "mf"; }

  const Eigen::VectorXd& gains() const { return gains_; }
  int processing_gain() const { return processing_gain_; }
  double noise_power() const { return noise_; }

 private:
  Eigen::VectorXd gains_;
  int processing_gain_;
  double noise_;
};

/// MF, decorrelator or MMSE receiver with explicit signature sequences.
class LinearReceiverModel final : public SirModel {
 public:
  LinearReceiverModel(ReceiverKind kind, Eigen::VectorXd gains, SpreadingSet spreading, double noise_power);

  Eigen::Index users() const override { return gains_.size(); }
  Eigen::VectorXd sirs(const Eigen::VectorXd& powers) const override;
  double own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const override;
  std::unique_ptr<GainTracker> tracker(const Eigen::VectorXd& powers) const override;
  std::string name() const override { return std::string(to_string(kind_)); }

  ReceiverKind kind() const { return kind_; }
  const SpreadingSet& spreading() const { return spreading_; }
  const Eigen::VectorXd& gains() const { return gains_; }
  double noise_power() const { return noise_; }

 private:
  ReceiverKind kind_;
  Eigen::VectorXd gains_;
  SpreadingSet spreading_;
  double noise_;
  Eigen::MatrixXd cross_;           // MF: squared cross-correlations
  Eigen::VectorXd decorrelated_;    // DE: h_k / (noise [(S'S)^-1]_kk)
};

/// Per-user spreading gain B / R_k with all other received power as
/// interference (the delay-constrained rate/power game).
class RateSpreadModel final : public SirModel {
 public:
  RateSpreadModel(Eigen::VectorXd gains, Eigen::VectorXd rates, double bandwidth_hz, double noise_power);

  Eigen::Index users() const override { return gains_.size(); }
  Eigen::VectorXd sirs(const Eigen::VectorXd& powers) const override;
  double own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const override;
  std::string name() const override { return "rate-spread"; }

 private:
  Eigen::VectorXd gains_;
  Eigen::VectorXd rates_;
  double bandwidth_;
  double noise_;
};

}  // namespace eepc
