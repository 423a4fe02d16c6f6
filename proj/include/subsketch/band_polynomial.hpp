#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subsketch/mollified_tukey.hpp"
#include "subsketch/quadrature.hpp"

namespace subsketch {

// Chebyshev approximation of the mollified loss on [a*tau, b*tau], certified
// against a dense grid to a target relative error.
struct BandPolynomial {
  double tau;
  double lo;
  double hi;
  std::vector<double> coefficients;  // Chebyshev basis on [lo, hi]
  int degree;
  double certified_rel_error;  // sup over the certification grid

  double eval(double t) const {
    return detail::clenshaw(coefficients, lo, hi, t);
  }
};

// Doubles the degree (8, 16, ..., 4096) until the fit passes a 10^4-point
// relative-error certificate against the mollified loss.
inline BandPolynomial fit_band_polynomial(double tau, double a, double b,
                                          double eps) {
  if (!(tau > 0.0))
    throw std::invalid_argument("fit_band_polynomial: tau must be positive");
  if (!(a > 0.0) || !(a < 0.75))
    throw std::invalid_argument("fit_band_polynomial: need 0 < a < 3/4");
  if (!(b > 1.0))
    throw std::invalid_argument("fit_band_polynomial: need b > 1");
  if (!(eps > 0.0) || !(eps < 0.5))
    throw std::invalid_argument("fit_band_polynomial: need 0 < eps < 1/2");

  MollifiedTukey phi(tau);
  const double lo = a * tau, hi = b * tau;
  constexpr int kGridPoints = 10000;
  constexpr int kDegreeCap = 4096;
  auto f = [&](double t) { return phi.eval(t); };

  for (int degree = 8; degree <= kDegreeCap; degree *= 2) {
    std::vector<double> coeffs = detail::fit_chebyshev(f, lo, hi, degree);
    double worst = 0.0;
    for (int g = 0; g <= kGridPoints; ++g) {
      double t = lo + (hi - lo) * g / kGridPoints;
      double exact = phi.eval(t);
      double approx = detail::clenshaw(coeffs, lo, hi, t);
      worst = std::max(worst, std::abs(approx - exact) / exact);
    }
    if (worst <= eps)
      return BandPolynomial{tau, lo, hi, std::move(coeffs), degree, worst};
  }
  throw std::runtime_error(
      "fit_band_polynomial: degree cap 4096 exceeded before certification");
}

}  // namespace subsketch
