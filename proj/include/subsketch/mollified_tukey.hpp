#pragma once

// Smoothed Tukey-1 loss: |t| capped at tau, with the corner at |t| = tau
// replaced by the convolution against a compactly supported bump of width
// tau/4. The result equals |t| for |t| <= 3tau/4, equals tau for
// |t| >= 5tau/4, and is infinitely smooth in between.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subsketch/quadrature.hpp"

namespace subsketch {

namespace detail {

inline double bump_unnormalized(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

// 1 / integral of the raw bump over [-1, 1].
inline double bump_norm_constant() {
  static const double c = [] {
    double integral =
        integrate_composite([](double x) { return bump_unnormalized(x); },
                            -1.0, 1.0, 64, 16);
    return 1.0 / integral;
  }();
  return c;
}

// Unit-integral bump on (-1, 1).
inline double bump(double x) { return bump_norm_constant() * bump_unnormalized(x); }

// Convolution (phi * psi_{tau/4})(t) for t inside the transition band,
// phi(z) = min(|z|, tau). The integrand has one interior kink at
// u = 4(t - tau)/tau; integrate the two smooth pieces separately.
inline double tukey_band_convolution(double t, double tau) {
  double s = tau / 4.0;
  double ustar = (t - tau) / s;
  if (ustar < -1.0) ustar = -1.0;
  if (ustar > 1.0) ustar = 1.0;
  auto f = [&](double u) {
    double z = std::abs(t - s * u);
    double phi = z < tau ? z : tau;
    return phi * bump(u);
  };
  return integrate_gl(f, -1.0, ustar, 48) + integrate_gl(f, ustar, 1.0, 48);
}

}  // namespace detail

class MollifiedTukey {
 public:
  explicit MollifiedTukey(double tau) : tau_(tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("MollifiedTukey: tau must be positive");
    lo_ = 0.75 * tau_;
    hi_ = 1.25 * tau_;
    cheb_ = detail::fit_chebyshev(
        [&](double t) { return detail::tukey_band_convolution(t, tau_); },
        lo_, hi_, 96);
  }

  double tau() const { return tau_; }

  double eval(double t) const {
    double a = std::abs(t);
    if (a <= lo_) return a;
    if (a >= hi_) return tau_;
    return detail::clenshaw(cheb_, lo_, hi_, a);
  }

  // Direct quadrature on the band, bypassing the Chebyshev cache.
  double eval_quadrature(double t) const {
    double a = std::abs(t);
    if (a <= lo_) return a;
    if (a >= hi_) return tau_;
    return detail::tukey_band_convolution(a, tau_);
  }

 private:
  double tau_;
  double lo_, hi_;
  std::vector<double> cheb_;
};

// One-shot evaluation; band values by direct quadrature.
inline double mollified_tukey_eval(double t, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("mollified_tukey_eval: tau must be positive");
  double a = std::abs(t);
  if (a <= 0.75 * tau) return a;
  if (a >= 1.25 * tau) return tau;
  return detail::tukey_band_convolution(a, tau);
}

}  // namespace subsketch
