#pragma once

// Scalar loss functions applied coordinatewise to Ax. All kernels are even
// and non-negative; power_p uses the 0^0 = 0 convention so the p -> 0 limit
// matches the support indicator.

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "subsketch/mollified_tukey.hpp"

namespace subsketch {

enum class KernelTag {
  power_p,
  zero_indicator,
  log_abs,
  tukey_p,
  huber,
  fair,
  cauchy_est,
  l1l2,
  mollified_tukey1,
};

class KernelFunction {
 public:
  static KernelFunction power(double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("KernelFunction: p must be >= 0");
    return KernelFunction(KernelTag::power_p, p, 0.0);
  }
  static KernelFunction zero_indicator() {
    return KernelFunction(KernelTag::zero_indicator, 0.0, 0.0);
  }
  static KernelFunction log_abs() {
    return KernelFunction(KernelTag::log_abs, 0.0, 0.0);
  }
  static KernelFunction tukey(double p, double tau) {
    require_tau(tau);
    return KernelFunction(KernelTag::tukey_p, p, tau);
  }
  static KernelFunction huber(double tau) {
    require_tau(tau);
    return KernelFunction(KernelTag::huber, 0.0, tau);
  }
  static KernelFunction fair(double tau) {
    require_tau(tau);
    return KernelFunction(KernelTag::fair, 0.0, tau);
  }
  static KernelFunction cauchy(double tau) {
    require_tau(tau);
    return KernelFunction(KernelTag::cauchy_est, 0.0, tau);
  }
  static KernelFunction l1l2() {
    return KernelFunction(KernelTag::l1l2, 0.0, 0.0);
  }
  static KernelFunction mollified_tukey1(double tau) {
    require_tau(tau);
    KernelFunction k(KernelTag::mollified_tukey1, 1.0, tau);
    k.moll_ = std::make_shared<MollifiedTukey>(tau);
    return k;
  }

  KernelTag tag() const { return tag_; }
  double p() const { return p_; }
  double tau() const { return tau_; }

  double eval(double t) const {
    double a = std::abs(t);
    switch (tag_) {
      case KernelTag::power_p:
        if (a == 0.0) return 0.0;
        return std::pow(a, p_);
      case KernelTag::zero_indicator:
        return a == 0.0 ? 0.0 : 1.0;
      case KernelTag::log_abs:
        return a >= 1.0 ? std::log(a) : 0.0;
      case KernelTag::tukey_p: {
        if (a == 0.0) return 0.0;
        double v = std::pow(a, p_);
        double cap = std::pow(tau_, p_);
        return v < cap ? v : cap;
      }
      case KernelTag::huber:
        return a <= tau_ ? a * a / (2.0 * tau_) : a - tau_ / 2.0;
      case KernelTag::fair:
        return tau_ * tau_ * (a / tau_ - std::log1p(a / tau_));
      case KernelTag::cauchy_est:
        return 0.5 * tau_ * tau_ * std::log1p((a / tau_) * (a / tau_));
      case KernelTag::l1l2:
        return 2.0 * (std::sqrt(1.0 + t * t / 2.0) - 1.0);
      case KernelTag::mollified_tukey1:
        return moll_->eval(a);
    }
    return 0.0;
  }

  std::string name() const {
    std::ostringstream os;
    switch (tag_) {
      case KernelTag::power_p: os << "PowerP(" << p_ << ")"; break;
      case KernelTag::zero_indicator: os << "ZeroIndicator"; break;
      case KernelTag::log_abs: os << "LogAbs"; break;
      case KernelTag::tukey_p: os << "TukeyP(" << p_ << "," << tau_ << ")"; break;
      case KernelTag::huber: os << "Huber(" << tau_ << ")"; break;
      case KernelTag::fair: os << "Fair(" << tau_ << ")"; break;
      case KernelTag::cauchy_est: os << "Cauchy(" << tau_ << ")"; break;
      case KernelTag::l1l2: os << "L1L2"; break;
      case KernelTag::mollified_tukey1: os << "MollifiedTukey1(" << tau_ << ")"; break;
    }
    return os.str();
  }

 private:
  KernelFunction(KernelTag tag, double p, double tau) : tag_(tag), p_(p), tau_(tau) {}
  static void require_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("KernelFunction: tau must be positive");
  }

  KernelTag tag_;
  double p_;
  double tau_;
  std::shared_ptr<const MollifiedTukey> moll_;
};

}  // namespace subsketch
