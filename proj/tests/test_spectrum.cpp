#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "subsketch/spectrum.hpp"

using namespace subsketch;

namespace {

// Dense oracle: materialize M_{ij} = phi(<cube_i, cube_j>) and diagonalize.
std::vector<double> dense_eigenvalues(const KernelFunction& kernel, int d) {
  std::size_t n = std::size_t{1} << d;
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int dist = std::popcount(i ^ j);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          kernel.eval(static_cast<double>(d - 2 * dist));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> spectrum_eigenvalues(const GridSpectrum& spec) {
  auto c = detail::binomial_table(spec.d);
  std::vector<double> ev;
  for (int w = 0; w <= spec.d; ++w)
    for (std::int64_t k = 0; k < detail::binom(c, spec.d, w); ++k)
      ev.push_back(spec.by_weight[w]);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

TEST_CASE("kernel_profile endpoint values") {
  auto g1 = kernel_profile(KernelFunction::power(1.0), 2);
  CHECK(g1 == std::vector<double>{2.0, 0.0, 2.0});
  auto g2 = kernel_profile(KernelFunction::power(2.0), 4);
  CHECK(g2 == std::vector<double>{16.0, 4.0, 0.0, 4.0, 16.0});
  auto g3 = kernel_profile(KernelFunction::zero_indicator(), 2);
  CHECK(g3 == std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("fourier_spectrum small exact values") {
  GridSpectrum s2 = fourier_spectrum(KernelFunction::power(1.0), 2);
  CHECK(s2.by_weight == std::vector<double>{4.0, 0.0, 4.0});
  CHECK(s2.lambda0 == 0.0);  // d/2 odd: the center coefficient vanishes

  GridSpectrum s4 = fourier_spectrum(KernelFunction::power(1.0), 4);
  CHECK(s4.lambda0 == 8.0);
  CHECK(s4.multiplicity >= 6);

  GridSpectrum s10 = fourier_spectrum(KernelFunction::power(1.0), 10);
  std::vector<double> expected{2520, 0, 280, 0, -40, 0, 24, 0, -40, 0, 280};
  REQUIRE(s10.by_weight.size() == expected.size());
  for (std::size_t w = 0; w < expected.size(); ++w)
    CHECK(s10.by_weight[w] == Catch::Approx(expected[w]).margin(1e-9));
}

TEST_CASE("odd-weight coefficients vanish exactly for even kernels") {
  for (int d : {4, 6, 10, 12}) {
    for (const auto& kernel :
         {KernelFunction::power(0.5), KernelFunction::power(1.5),
          KernelFunction::log_abs(), KernelFunction::huber(1.0)}) {
      GridSpectrum s = fourier_spectrum(kernel, d);
      for (int w = 1; w <= d; w += 2) CHECK(s.by_weight[w] == 0.0);
    }
  }
}

TEST_CASE("krawtchouk and wht routes agree") {
  for (int d : {4, 8, 10, 12}) {
    for (const auto& kernel :
         {KernelFunction::power(1.0), KernelFunction::power(2.5),
          KernelFunction::zero_indicator(), KernelFunction::cauchy(1.0),
          KernelFunction::l1l2()}) {
      GridSpectrum s = fourier_spectrum(kernel, d);
      std::vector<double> wht = fourier_spectrum_wht(kernel, d);
      REQUIRE(wht.size() == s.by_weight.size());
      double scale = 0.0;
      for (double v : s.by_weight) scale = std::max(scale, std::abs(v));
      for (std::size_t w = 0; w < wht.size(); ++w)
        CHECK(s.by_weight[w] == Catch::Approx(wht[w]).margin(1e-9 * std::max(1.0, scale)));
    }
  }
}

TEST_CASE("spectrum matches dense eigendecomposition at small d") {
  for (int d : {2, 4}) {
    for (const auto& kernel :
         {KernelFunction::power(1.0), KernelFunction::power(2.0),
          KernelFunction::zero_indicator()}) {
      auto dense = dense_eigenvalues(kernel, d);
      auto fast = spectrum_eigenvalues(fourier_spectrum(kernel, d));
      REQUIRE(dense.size() == fast.size());
      double scale = std::max(std::abs(dense.front()), std::abs(dense.back()));
      for (std::size_t i = 0; i < dense.size(); ++i)
        CHECK(fast[i] == Catch::Approx(dense[i]).margin(1e-8 * std::max(1.0, scale)));
    }
  }
}

TEST_CASE("alternating sum frozen values for p=1") {
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 2) == 0.0);
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 4) == 8.0);
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 8) == -16.0);
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 10) == 0.0);
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 12) == 48.0);
  CHECK(lambda0_alternating_sum(KernelFunction::power(1.0), 16) == -160.0);
  CHECK_THROWS(lambda0_alternating_sum(KernelFunction::power(1.0), 5));
}

TEST_CASE("even integer p kills the center coefficient exactly") {
  for (int d = 6; d <= 24; d += 2) {
    if (d / 2 > 2)
      CHECK(lambda0_alternating_sum(KernelFunction::power(2.0), d) == 0.0);
    if (d / 2 > 4)
      CHECK(lambda0_alternating_sum(KernelFunction::power(4.0), d) == 0.0);
  }
}

TEST_CASE("zero indicator center coefficient closed form") {
  for (int d : {4, 8, 12, 16, 20, 24}) {
    double got = lambda0_alternating_sum(KernelFunction::zero_indicator(), d);
    auto cd = detail::binomial_table(d);
    double magnitude = static_cast<double>(detail::binom(cd, d / 2, d / 4));
    double sign = (d / 4) % 2 == 0 ? -1.0 : 1.0;
    CHECK(got == sign * magnitude);
  }
}

TEST_CASE("hurwitz zeta spot values") {
  const double pi = std::acos(-1.0);
  CHECK(detail::hurwitz_zeta(2.0, 1.0) == Catch::Approx(pi * pi / 6.0).epsilon(1e-13));
  CHECK(detail::hurwitz_zeta(2.0, 0.5) == Catch::Approx(pi * pi / 2.0).epsilon(1e-13));
  CHECK(detail::hurwitz_zeta(3.0, 1.0) == Catch::Approx(1.202056903159594).epsilon(1e-13));
  CHECK(detail::hurwitz_zeta(1.5, 0.25) == Catch::Approx(10.213055360466601).epsilon(1e-13));
}

TEST_CASE("integral route agrees with the alternating sum at d=8") {
  for (double p : {0.5, 1.0, 1.5, 2.5}) {
    double alt = lambda0_alternating_sum(KernelFunction::power(p), 8);
    double integral = lambda0_integral(p, 8);
    CHECK(integral == Catch::Approx(alt).epsilon(1e-9));
  }
  CHECK(lambda0_integral(2.0, 8) == 0.0);
  CHECK_THROWS(lambda0_integral(1.0, 12));   // d must be a multiple of 8
  CHECK_THROWS(lambda0_integral(4.5, 8));    // p < d/2 required
  CHECK_THROWS(lambda0_integral(-1.0, 8));
}

TEST_CASE("center coefficient clears the analytic lower bound") {
  LowerBoundCheck p1 = lambda0_lower_bound_check(KernelFunction::power(1.0), 8);
  CHECK(p1.ratio >= 1.0);
  CHECK(p1.lambda0 == -16.0);

  LowerBoundCheck la = lambda0_lower_bound_check(KernelFunction::log_abs(), 16, 0.05);
  CHECK(la.ratio >= 1.0);
  CHECK(std::abs(la.lambda0) >= 0.05 * 256.0 / 4.0);

  // even p: both sides vanish, ratio pins to 1
  LowerBoundCheck p2 = lambda0_lower_bound_check(KernelFunction::power(2.0), 8);
  CHECK(p2.lambda0 == 0.0);
  CHECK(p2.bound == 0.0);
  CHECK(p2.ratio == 1.0);
}

TEST_CASE("dominant level tables") {
  SpectrumLevel l10 = dominant_level(fourier_spectrum(KernelFunction::power(1.0), 10));
  CHECK(l10.sigma == Catch::Approx(40.0).margin(1e-9));
  CHECK(l10.weights == std::vector<int>{4, 8});
  CHECK(l10.multiplicity == 255);

  SpectrumLevel l10b = dominant_level(fourier_spectrum(KernelFunction::power(1.5), 10));
  CHECK(l10b.weights == std::vector<int>{4});
  CHECK(l10b.multiplicity == 210);

  SpectrumLevel l12 = dominant_level(fourier_spectrum(KernelFunction::power(1.0), 12));
  CHECK(l12.sigma == Catch::Approx(48.0).margin(1e-9));
  CHECK(l12.weights == std::vector<int>{6, 8});
  CHECK(l12.multiplicity == 1419);

  SpectrumLevel l12b = dominant_level(fourier_spectrum(KernelFunction::power(1.5), 12));
  CHECK(l12b.sigma == Catch::Approx(51.609434787672).epsilon(1e-10));
  CHECK(l12b.weights == std::vector<int>{6});
  CHECK(l12b.multiplicity == 924);

  // d=8, p=1: weights 4 and 6 carry coefficients -16 and +16
  SpectrumLevel l8 = dominant_level(fourier_spectrum(KernelFunction::power(1.0), 8));
  CHECK(l8.sigma == Catch::Approx(16.0).margin(1e-9));
  CHECK(l8.weights == std::vector<int>{4, 6});
  CHECK(l8.multiplicity == 98);
}
