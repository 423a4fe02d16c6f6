#pragma once

// Eigenvalue structure of the 2^d x 2^d kernel matrices M_{ij} = phi(<i,j>)
// over the sign cube. Diagonalized by the Walsh-Hadamard basis, so the whole
// spectrum is the d+1 numbers by_weight[w], each repeated C(d,w) times. The
// distinguished value lambda0 = by_weight[d/2] is computed by three routes:
// Krawtchouk sums (default), one WHT (cross-check), and for power kernels a
// closed-form integral identity.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "subsketch/kernels.hpp"
#include "subsketch/quadrature.hpp"
#include "subsketch/wht.hpp"

namespace subsketch {

struct GridSpectrum {
  int d;
  KernelFunction kernel;
  std::vector<double> by_weight;  // Fourier coefficient at each Hamming weight
  double lambda0;                 // by_weight[d/2] when d is even
  std::int64_t multiplicity;      // eigenvalues matching |lambda0|
};

// g(i) = phi(d - 2i), the matrix entry at Hamming distance i.
inline std::vector<double> kernel_profile(const KernelFunction& kernel, int d) {
  if (d < 1) throw std::invalid_argument("kernel_profile: d must be >= 1");
  std::vector<double> g(d + 1);
  for (int i = 0; i <= d; ++i) g[i] = kernel.eval(static_cast<double>(d - 2 * i));
  return g;
}

namespace detail {

inline std::vector<std::vector<std::int64_t>> binomial_table(int n) {
  std::vector<std::vector<std::int64_t>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

inline std::int64_t binom(const std::vector<std::vector<std::int64_t>>& c,
                          int n, int k) {
  if (k < 0 || k > n) return 0;
  return c[n][k];
}

// Binary Krawtchouk value K_i(w) = sum_j (-1)^j C(w,j) C(d-w,i-j).
inline std::int64_t krawtchouk(int i, int w, int d,
                               const std::vector<std::vector<std::int64_t>>& c) {
  std::int64_t sum = 0;
  for (int j = std::max(0, i - (d - w)); j <= std::min(i, w); ++j) {
    std::int64_t term = binom(c, w, j) * binom(c, d - w, i - j);
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace detail

// The alternating sum over even distances; equals by_weight[d/2]. Uses exact
// integer arithmetic when the profile is integral (even integer powers and
// the support indicator), so the even-p vanishing is exact, not approximate.
inline double lambda0_alternating_sum(const KernelFunction& kernel, int d) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("lambda0_alternating_sum: d must be even and >= 2");
  auto c = detail::binomial_table(d);
  bool integral_profile =
      kernel.tag() == KernelTag::zero_indicator ||
      (kernel.tag() == KernelTag::power_p && kernel.p() == std::round(kernel.p()) &&
       static_cast<long long>(std::llround(kernel.p())) % 2 == 0 && kernel.p() <= 14.0);
  if (integral_profile) {
    __int128 sum = 0;
    long long pi = std::llround(kernel.p());
    for (int i = 0; i <= d; i += 2) {
      long long t = std::llabs(static_cast<long long>(d - 2 * i));
      __int128 gi;
      if (kernel.tag() == KernelTag::zero_indicator) {
        gi = (t != 0) ? 1 : 0;
      } else {
        gi = (t == 0) ? 0 : 1;
        for (long long e = 0; e < pi && t != 0; ++e) gi *= t;
      }
      __int128 term = static_cast<__int128>(c[d / 2][i / 2]) * gi;
      sum += ((i / 2) % 2 == 0) ? term : -term;
    }
    return static_cast<double>(sum);
  }
  std::vector<double> g = kernel_profile(kernel, d);
  double sum = 0.0;
  for (int i = 0; i <= d; i += 2) {
    double term = static_cast<double>(c[d / 2][i / 2]) * g[i];
    sum += ((i / 2) % 2 == 0) ? term : -term;
  }
  return sum;
}

// Krawtchouk-sum route, O(d^2) after the binomial table. Symmetric pairs
// i and d-i are folded at integer precision, which makes every odd-weight
// coefficient an exact zero for these even kernels.
inline GridSpectrum fourier_spectrum(const KernelFunction& kernel, int d) {
  if (d < 1 || d > 24)
    throw std::invalid_argument("fourier_spectrum: d must be in [1, 24]");
  auto c = detail::binomial_table(d);
  std::vector<double> g = kernel_profile(kernel, d);
  std::vector<double> bw(d + 1, 0.0);
  for (int w = 0; w <= d; ++w) {
    double sum = 0.0;
    for (int i = 0; i * 2 < d; ++i) {
      std::int64_t k = detail::krawtchouk(i, w, d, c) + detail::krawtchouk(d - i, w, d, c);
      sum += static_cast<double>(k) * g[i];
    }
    if (d % 2 == 0)
      sum += static_cast<double>(detail::krawtchouk(d / 2, w, d, c)) * g[d / 2];
    bw[w] = sum;
  }
  GridSpectrum spec{d, kernel, std::move(bw), 0.0, 0};
  if (d % 2 == 0) {
    spec.lambda0 = spec.by_weight[d / 2];
    double tol = 1e-9 * std::max(1.0, std::abs(spec.lambda0));
    for (int w = 0; w <= d; ++w)
      if (std::abs(std::abs(spec.by_weight[w]) - std::abs(spec.lambda0)) <= tol)
        spec.multiplicity += c[d][w];
  }
  return spec;
}

// Same coefficients via a single WHT of x -> g(weight(x)); O(d 2^d), used to
// cross-validate the Krawtchouk route.
inline std::vector<double> fourier_spectrum_wht(const KernelFunction& kernel, int d) {
  if (d < 1 || d > 24)
    throw std::invalid_argument("fourier_spectrum_wht: d must be in [1, 24]");
  std::vector<double> g = kernel_profile(kernel, d);
  std::size_t n = std::size_t{1} << d;
  std::vector<double> v(n);
  for (std::size_t x = 0; x < n; ++x)
    v[x] = g[static_cast<int>(std::popcount(x))];
  fwht_raw(v.data(), n);  // unnormalized transform is the coefficient itself
  std::vector<double> bw(d + 1, 0.0);
  for (int w = 0; w <= d; ++w) {
    std::size_t s = (std::size_t{1} << w) - 1;  // lowest index of weight w
    bw[w] = v[s];
  }
  return bw;
}

namespace detail {

// Hurwitz zeta for s > 1, 0 < a <= 1, by Euler-Maclaurin.
inline double hurwitz_zeta(double s, double a) {
  constexpr int kDirect = 24;
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(a + k, -s);
  double x = a + kDirect;
  sum += std::pow(x, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(x, -s);
  // B_{2j}/(2j)! for j = 1..6
  static constexpr double b2f[] = {1.0 / 12, -1.0 / 720, 1.0 / 30240,
                                   -1.0 / 1209600, 1.0 / 47900160,
                                   -691.0 / 1307674368000.0};
  double rising = s;            // s (s+1) ... (s + 2j - 2)
  double power = std::pow(x, -s - 1.0);
  for (int j = 0; j < 6; ++j) {
    sum += b2f[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= x * x;
  }
  return sum;
}

// integral over (0, inf) of sin^m(t) / t^{p+1}, for 0 < p < m. The periodic
// tail folds into a Hurwitz zeta over one period; the substitution t = u^2
// removes the fractional-power derivative singularity at the origin.
inline double sine_power_integral(int m, double p) {
  const double pi = std::numbers::pi;
  auto f = [&](double u) {
    double t = u * u;
    double s = std::sin(t);
    return std::pow(s, m) * std::pow(pi, -(p + 1.0)) *
           hurwitz_zeta(p + 1.0, t / pi) * 2.0 * u;
  };
  return integrate_composite(f, 0.0, std::sqrt(pi), 160, 16);
}

}  // namespace detail

// Closed-form route for the power kernel: the alternating sum equals
// (-1)^{d/4+1} 2^{p+1+d/2} (Gamma(p+1)/pi) sin(p pi/2) Integral,
// with Integral = int_0^inf sin^{d/2} t / t^{p+1} dt. Signed value, so all
// three routes agree including sign.
inline double lambda0_integral(double p, int d) {
  if (d % 8 != 0 || d < 8)
    throw std::invalid_argument("lambda0_integral: d must be a positive multiple of 8");
  if (!(p > 0.0) || !(p < d / 2.0))
    throw std::invalid_argument("lambda0_integral: need 0 < p < d/2");
  if (p == std::round(p) && std::llround(p) % 2 == 0) return 0.0;  // sin factor
  int n = d / 4;
  double integral = detail::sine_power_integral(d / 2, p);
  double value = std::pow(2.0, p + 1.0 + d / 2.0) *
                 (std::tgamma(p + 1.0) / std::numbers::pi) *
                 std::sin(p * std::numbers::pi / 2.0) * integral;
  return (n % 2 == 0) ? -value : value;
}

struct LowerBoundCheck {
  double lambda0;
  double bound;
  double ratio;
};

// Compares |lambda0| against the c 2^{d/2}/sqrt(d) shape (times |sin(p pi/2)|
// for the power kernel). ratio = 1 when both sides vanish.
inline LowerBoundCheck lambda0_lower_bound_check(const KernelFunction& kernel,
                                                 int d, double c = 1.0) {
  if (d % 8 != 0 || d < 8 || d > 24)
    throw std::invalid_argument("lambda0_lower_bound_check: d must be in {8,16,24}");
  double lambda0 = lambda0_alternating_sum(kernel, d);
  double bound = c * std::pow(2.0, d / 2.0) / std::sqrt(static_cast<double>(d));
  if (kernel.tag() == KernelTag::power_p) {
    double p = kernel.p();
    bool even_integer = p == std::round(p) &&
                        static_cast<long long>(std::llround(p)) % 2 == 0;
    bound *= even_integer ? 0.0 : std::abs(std::sin(p * std::numbers::pi / 2.0));
  }
  double ratio = bound == 0.0 ? 1.0 : std::abs(lambda0) / bound;
  return {lambda0, bound, ratio};
}

struct SpectrumLevel {
  double sigma;               // eigenvalue magnitude of the kept level
  std::vector<int> weights;   // Hamming weights carrying that magnitude
  std::int64_t multiplicity;  // total eigenvalue count of the level
};

// The level the hard instance keeps: |lambda0| when it is nonzero, otherwise
// the nonzero coefficient at the even weight nearest d/2 (tie toward the
// lower weight; when d/2 is odd every odd-weight coefficient vanishes
// identically, so a fallback level is the only option).
inline SpectrumLevel dominant_level(const GridSpectrum& spec) {
  int d = spec.d;
  if (d % 2 != 0) throw std::invalid_argument("dominant_level: d must be even");
  double scale = 0.0;
  for (double v : spec.by_weight) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw std::invalid_argument("dominant_level: zero spectrum");
  double floor = 1e-9 * scale;
  double sigma = std::abs(spec.lambda0);
  if (sigma <= floor) {
    sigma = 0.0;
    for (int dist = 1; dist <= d && sigma == 0.0; ++dist) {
      for (int w : {d / 2 - dist, d / 2 + dist}) {
        if (w >= 0 && w <= d && std::abs(spec.by_weight[w]) > floor) {
          sigma = std::abs(spec.by_weight[w]);
          break;
        }
      }
    }
  }
  auto c = detail::binomial_table(d);
  SpectrumLevel level{sigma, {}, 0};
  double tol = 1e-9 * std::max(1.0, sigma);
  for (int w = 0; w <= d; ++w) {
    if (std::abs(std::abs(spec.by_weight[w]) - sigma) <= tol) {
      level.weights.push_back(w);
      level.multiplicity += c[d][w];
    }
  }
  return level;
}

}  // namespace subsketch
