#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subsketch/band_polynomial.hpp"
#include "subsketch/count_sketch.hpp"
#include "subsketch/mollified_tukey.hpp"
#include "subsketch/rng.hpp"

namespace subsketch {

// Exact scan: sum of the mollified loss over all coordinates.
inline double exact_tukey_mass(const std::vector<double>& x, double tau) {
  MollifiedTukey phi(tau);
  double sum = 0.0;
  for (double v : x) sum += phi.eval(v);
  return sum;
}

struct TukeyEstimate {
  double estimate;
  double coarse;  // coarse mass estimate F (exact scan standing in for a
                  // separate small-space structure)
  bool coarse_oracle_assisted;
  double sampling_rate;  // r, a power of 1.1 in (0, 1]
  double beta;
  int band_degree;
  double s1, s2, s3;
  std::size_t h1_count;
  std::size_t h2_count;
  std::size_t sampled_count;
  std::vector<std::size_t> h1_indices;  // original coordinates behind S1
};

namespace detail {

// Power of 1.1 nearest to `target` in log space, clamped to (0, 1].
inline double sampling_rate_near(double target) {
  if (!(target > 0.0)) return 1.0;
  double k = std::round(std::log(target) / std::log(1.1));
  double r = std::pow(1.1, k);
  return std::min(r, 1.0);
}

inline std::vector<std::size_t> bernoulli_indices(std::size_t n, double r,
                                                  RngStream& rng) {
  std::vector<std::size_t> idx;
  if (r >= 1.0) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (rng.next_double() < r) idx.push_back(i);
  return idx;
}

// Median-of-|Cauchy-sketch| l1 estimate, 1000 rows, median scale 1.
inline double cauchy_l1_estimate(const std::vector<double>& v, RngStream& rng) {
  constexpr std::size_t kRows = 1000;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) support.push_back(i);
  if (support.empty()) return 0.0;
  std::vector<double> y(kRows, 0.0);
  for (std::size_t k = 0; k < kRows; ++k)
    for (std::size_t i : support) y[k] += rng.next_cauchy() * v[i];
  for (double& val : y) val = std::abs(val);
  std::size_t idx = (kRows - 1) / 2;
  std::nth_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(idx), y.end());
  return y[idx];
}

}  // namespace detail

// Sampling + heavy-hitter estimator for the mollified Tukey mass:
//   1. coarse mass F by exact scan;
//   2. Bernoulli(r) row sampling at r near tau/(F eps^2) (r = 1 for small n);
//   3. Count-Sketch heavy hitters on the sample at beta = eps^2/4;
//   4. S1 = tau * #{estimates >= 5tau/4};
//      S2 = band-polynomial values on estimates in [3tau/8, 5tau/2];
//      S3 = Cauchy-sketch l1 estimate of what remains (the loss is |.| there);
//   5. return (S1 + S2 + S3) / r.
inline TukeyEstimate estimate_tukey_detailed(const std::vector<double>& x,
                                             double tau, double eps,
                                             RngStream& rng) {
  if (!(tau > 0.0)) throw std::invalid_argument("estimate_tukey: tau must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_tukey: eps must be positive");
  if (x.empty()) throw std::invalid_argument("estimate_tukey: empty input");

  TukeyEstimate out{};
  out.coarse_oracle_assisted = true;
  out.beta = eps * eps / 4.0;

  MollifiedTukey phi(tau);
  double coarse = 0.0;
  for (double v : x) coarse += phi.eval(v);
  out.coarse = coarse;
  if (coarse == 0.0) {
    out.estimate = 0.0;
    out.sampling_rate = 1.0;
    out.band_degree = 0;
    return out;
  }

  double n = static_cast<double>(x.size());
  double r = 1.0;
  if (n > 1.0 / (eps * eps))
    r = detail::sampling_rate_near(tau / (coarse * eps * eps));
  out.sampling_rate = r;

  RngStream sample_rng = rng.derive("bernoulli-sample");
  RngStream hh_rng = rng.derive("heavy-hitters");
  RngStream cauchy_rng = rng.derive("cauchy-residual");

  std::vector<std::size_t> idx = detail::bernoulli_indices(x.size(), r, sample_rng);
  std::vector<double> xl(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) xl[k] = x[idx[k]];
  out.sampled_count = xl.size();

  BandPolynomial band = fit_band_polynomial(tau, 3.0 / 16.0, 5.0, eps / 2.0);
  out.band_degree = band.degree;

  auto hh = heavy_hitters(xl, out.beta, hh_rng);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& [k, est] : hh) {
    double a = std::abs(est);
    if (a >= 1.25 * tau) {
      s1 += tau;
      ++out.h1_count;
      out.h1_indices.push_back(idx[k]);
      xl[k] = 0.0;
    } else if (a >= 0.375 * tau && a <= 2.5 * tau) {
      s2 += band.eval(a);
      ++out.h2_count;
      xl[k] = 0.0;
    }
  }
  double s3 = detail::cauchy_l1_estimate(xl, cauchy_rng);

  out.s1 = s1;
  out.s2 = s2;
  out.s3 = s3;
  out.estimate = (s1 + s2 + s3) / r;
  return out;
}

inline double estimate_tukey(const std::vector<double>& x, double tau,
                             double eps, RngStream& rng) {
  return estimate_tukey_detailed(x, tau, eps, rng).estimate;
}

}  // namespace subsketch
