#include "eepc/sir_model.hpp"

#include "eepc/errors.hpp"

namespace eepc {

namespace {

class RecomputingTracker final : public GainTracker {
 public:
  RecomputingTracker(const SirModel& model, Eigen::VectorXd powers) : model_(model), powers_(std::move(powers)) {}
  void reset(const Eigen::VectorXd& powers) override { powers_ = powers; }
  double own_gain(Eigen::Index k) override { return model_.own_gain(k, powers_); }
  void set_power(Eigen::Index k, double power) override { powers_(k) = power; }

 private:
  const SirModel& model_;
  Eigen::VectorXd powers_;
};

// Keeps the total received power so each own_gain is O(1).
class TotalPowerTracker final : public GainTracker {
 public:
  TotalPowerTracker(const ProcessingGainMf& model, const Eigen::VectorXd& powers) : model_(model) { reset(powers); }
  void reset(const Eigen::VectorXd& powers) override {
    received_ = powers.cwiseProduct(model_.gains());
    total_ = received_.sum();
  }
  double own_gain(Eigen::Index k) override {
    const double others = total_ - received_(k);
    return model_.gains()(k) / (model_.noise_power() + others / model_.processing_gain());
  }
  void set_power(Eigen::Index k, double power) override {
    const double q = power * model_.gains()(k);
    total_ += q - received_(k);
    received_(k) = q;
  }

 private:
  const ProcessingGainMf& model_;
  Eigen::VectorXd received_;
  double total_ = 0.0;
};

class MfCorrelationTracker final : public GainTracker {
 public:
  MfCorrelationTracker(const Eigen::MatrixXd& cross, const Eigen::VectorXd& gains, double noise,
                       const Eigen::VectorXd& powers)
      : cross_(cross), gains_(gains), noise_(noise) {
    reset(powers);
  }
  void reset(const Eigen::VectorXd& powers) override {
    received_ = powers.cwiseProduct(gains_);
    interference_ = cross_ * received_;
  }
  double own_gain(Eigen::Index k) override {
    const double others = interference_(k) - cross_(k, k) * received_(k);
    return gains_(k) * cross_(k, k) / (noise_ + others);
  }
  void set_power(Eigen::Index k, double power) override {
    const double q = power * gains_(k);
    interference_ += cross_.col(k) * (q - received_(k));
    received_(k) = q;
  }

 private:
  const Eigen::MatrixXd& cross_;
  const Eigen::VectorXd& gains_;
  double noise_;
  Eigen::VectorXd received_;
  Eigen::VectorXd interference_;
};

class ConstantGainTracker final : public GainTracker {
 public:
  explicit ConstantGainTracker(const Eigen::VectorXd& own) : own_(own) {}
  void reset(const Eigen::VectorXd&) override {}
  double own_gain(Eigen::Index k) override { return own_(k); }
  void set_power(Eigen::Index, double) override {}

 private:
  const Eigen::VectorXd& own_;
};

// Holds A^-1 for A = noise I + S diag(q) S' and applies Sherman-Morrison
// updates on each power change; reset() refactors from scratch.
class MmseTracker final : public GainTracker {
 public:
  MmseTracker(const Eigen::MatrixXd& spreading, const Eigen::VectorXd& gains, double noise,
              const Eigen::VectorXd& powers)
      : s_(spreading), gains_(gains), noise_(noise) {
    reset(powers);
  }
  void reset(const Eigen::VectorXd& powers) override {
    received_ = powers.cwiseProduct(gains_);
    const Eigen::Index n = s_.rows();
    Eigen::MatrixXd covariance = Eigen::MatrixXd::Identity(n, n) * noise_;
    covariance.noalias() += s_ * received_.asDiagonal() * s_.transpose();
    inverse_ = covariance.llt().solve(Eigen::MatrixXd::Identity(n, n));
  }
  double own_gain(Eigen::Index k) override {
    const double t = s_.col(k).dot(inverse_ * s_.col(k));
    return gains_(k) * t / (1.0 - received_(k) * t);
  }
  void set_power(Eigen::Index k, double power) override {
    const double q = power * gains_(k);
    const double delta = q - received_(k);
    if (delta == 0.0) return;
    const Eigen::VectorXd u = inverse_ * s_.col(k);
    const double denom = 1.0 + delta * s_.col(k).dot(u);
    inverse_.noalias() -= (delta / denom) * u * u.transpose();
    received_(k) = q;
  }

 private:
  const Eigen::MatrixXd& s_;
  const Eigen::VectorXd& gains_;
  double noise_;
  Eigen::VectorXd received_;
  Eigen::MatrixXd inverse_;
};

}  // namespace

double SirModel::own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const {
  Eigen::VectorXd probe = powers;
  probe(k) = 1.0;
  return sirs(probe)(k);
}

std::unique_ptr<GainTracker> SirModel::tracker(const Eigen::VectorXd& powers) const {
  return std::make_unique<RecomputingTracker>(*this, powers);
}

ProcessingGainMf::ProcessingGainMf(Eigen::VectorXd gains, int processing_gain, double noise_power)
    : gains_(std::move(gains)), processing_gain_(processing_gain), noise_(noise_power) {
  if (processing_gain_ < 1 || !(noise_ > 0.0)) throw DomainError("mf model: N and noise must be positive");
  if (!(gains_.array() > 0.0).all()) throw DomainError("mf model: gains must be positive");
}

Eigen::VectorXd ProcessingGainMf::sirs(const Eigen::VectorXd& powers) const {
  return sir_mf(powers, gains_, processing_gain_, noise_);
}

double ProcessingGainMf::own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const {
  const double others = powers.dot(gains_) - powers(k) * gains_(k);
  return gains_(k) / (noise_ + others / processing_gain_);
}

std::unique_ptr<GainTracker> ProcessingGainMf::tracker(const Eigen::VectorXd& powers) const {
  return std::make_unique<TotalPowerTracker>(*this, powers);
}

LinearReceiverModel::LinearReceiverModel(ReceiverKind kind, Eigen::VectorXd gains, SpreadingSet spreading,
                                         double noise_power)
    : kind_(kind), gains_(std::move(gains)), spreading_(std::move(spreading)), noise_(noise_power) {
  if (spreading_.users() != gains_.size()) throw DimensionError("linear receiver: one sequence per user");
  if (!(noise_ > 0.0)) throw DomainError("linear receiver: noise must be positive");
  if (kind_ == ReceiverKind::MF) {
    cross_ = (spreading_.matrix().transpose() * spreading_.matrix()).cwiseAbs2();
  } else if (kind_ == ReceiverKind::DE) {
    // DE SIR is p_k times a constant; probe with unit powers.
    decorrelated_ = sir_linear(Eigen::VectorXd::Ones(gains_.size()), gains_, spreading_.matrix(), noise_, kind_);
  }
}

Eigen::VectorXd LinearReceiverModel::sirs(const Eigen::VectorXd& powers) const {
  if (kind_ == ReceiverKind::DE) return powers.cwiseProduct(decorrelated_);
  return sir_linear(powers, gains_, spreading_.matrix(), noise_, kind_);
}

double LinearReceiverModel::own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const {
  switch (kind_) {
    case ReceiverKind::DE: return decorrelated_(k);
    case ReceiverKind::MF: {
      const Eigen::VectorXd received = powers.cwiseProduct(gains_);
      const double others = cross_.row(k).dot(received) - cross_(k, k) * received(k);
      return gains_(k) * cross_(k, k) / (noise_ + others);
    }
    case ReceiverKind::MMSE: {
      const auto& s = spreading_.matrix();
      const Eigen::Index n = s.rows();
      Eigen::VectorXd received = powers.cwiseProduct(gains_);
      received(k) = 0.0;
      Eigen::MatrixXd covariance = Eigen::MatrixXd::Identity(n, n) * noise_;
      covariance.noalias() += s * received.asDiagonal() * s.transpose();
      const Eigen::VectorXd filter = covariance.llt().solve(s.col(k));
      return gains_(k) * s.col(k).dot(filter);
    }
  }
  return 0.0;
}

std::unique_ptr<GainTracker> LinearReceiverModel::tracker(const Eigen::VectorXd& powers) const {
  switch (kind_) {
    case ReceiverKind::DE: return std::make_unique<ConstantGainTracker>(decorrelated_);
    case ReceiverKind::MF: return std::make_unique<MfCorrelationTracker>(cross_, gains_, noise_, powers);
    case ReceiverKind::MMSE:
      return std::make_unique<MmseTracker>(spreading_.matrix(), gains_, noise_, powers);
  }
  return SirModel::tracker(powers);
}

RateSpreadModel::RateSpreadModel(Eigen::VectorXd gains, Eigen::VectorXd rates, double bandwidth_hz,
                                 double noise_power)
    : gains_(std::move(gains)), rates_(std::move(rates)), bandwidth_(bandwidth_hz), noise_(noise_power) {
  if (gains_.size() != rates_.size()) throw DimensionError("rate-spread model: one rate per user");
  if (!(bandwidth_ > 0.0) || !(noise_ > 0.0)) throw DomainError("rate-spread model: B and noise must be positive");
}

Eigen::VectorXd RateSpreadModel::sirs(const Eigen::VectorXd& powers) const {
  const Eigen::VectorXd received = powers.cwiseProduct(gains_);
  const double total = received.sum();
  Eigen::VectorXd sir(received.size());
  for (Eigen::Index k = 0; k < sir.size(); ++k) {
    sir(k) = (bandwidth_ / rates_(k)) * received(k) / (noise_ + total - received(k));
  }
  return sir;
}

double RateSpreadModel::own_gain(Eigen::Index k, const Eigen::VectorXd& powers) const {
  const double others = powers.dot(gains_) - powers(k) * gains_(k);
  return (bandwidth_ / rates_(k)) * gains_(k) / (noise_ + others);
}

}  // namespace eepc
