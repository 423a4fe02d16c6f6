#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "subsketch/kernels.hpp"
#include "subsketch/linalg.hpp"
#include "subsketch/query_matrix.hpp"
#include "subsketch/rng.hpp"
#include "subsketch/wht.hpp"

using namespace subsketch;

namespace {

QueryMatrix identity2() {
  QueryMatrix a(2, 2, 1.0);
  a.set_raw(0, 0, 1);
  a.set_raw(1, 1, 1);
  return a;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("phi_norm identity examples") {
  QueryMatrix a = identity2();
  CHECK(phi_norm(a, {3.0, 4.0}, KernelFunction::power(1.0)) == 7.0);
  CHECK(phi_norm(a, {3.0, 4.0}, KernelFunction::power(2.0)) == 25.0);
  CHECK(phi_norm(a, {0.0, 5.0}, KernelFunction::zero_indicator()) == 1.0);
}

TEST_CASE("phi_norm rejects dimension mismatch") {
  QueryMatrix a = identity2();
  CHECK_THROWS(phi_norm(a, {1.0, 2.0, 3.0}, KernelFunction::power(1.0)));
}

TEST_CASE("phi_norm degree-p homogeneity") {
  RngStream rng(42, "homogeneity");
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    QueryMatrix a(6, 3, 0.25);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        a.set_raw(i, j, static_cast<std::int64_t>(rng.next_below(17)) - 8);
    std::vector<double> x{0.7, -1.3, 2.1};
    std::vector<double> cx{-1.9 * 0.7, -1.9 * -1.3, -1.9 * 2.1};
    double base = phi_norm(a, x, KernelFunction::power(p));
    double scaled = phi_norm(a, cx, KernelFunction::power(p));
    CHECK(scaled == Catch::Approx(std::pow(1.9, p) * base).epsilon(1e-10));
  }
}

TEST_CASE("walsh_hadamard d=1 examples") {
  auto r1 = walsh_hadamard({1.0, 0.0});
  CHECK(r1[0] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  CHECK(r1[1] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  auto r2 = walsh_hadamard({1.0, 1.0});
  CHECK(r2[0] == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
  CHECK(r2[1] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("walsh_hadamard rejects non-power-of-two input") {
  CHECK_THROWS(walsh_hadamard({1.0, 2.0, 3.0}));
}

TEST_CASE("walsh_hadamard involution and Parseval") {
  for (int d : {4, 8, 10}) {
    RngStream rng(7 + d, "wht");
    std::size_t n = std::size_t{1} << d;
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.next_normal();
      auto w = walsh_hadamard(v);
      CHECK(l2(w) == Catch::Approx(l2(v)).epsilon(1e-10));
      auto back = walsh_hadamard(w);
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(back[i] - v[i]));
      CHECK(diff <= 1e-10 * std::max(1.0, l2(v)));
    }
  }
}

TEST_CASE("cube_rows conventions") {
  QueryMatrix c1 = cube_rows(1);
  CHECK(c1.entry(0, 0) == 1.0);
  CHECK(c1.entry(1, 0) == -1.0);

  QueryMatrix c2 = cube_rows(2);
  double expect[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(c2.entry(i, j) == expect[i][j]);

  for (int d : {3, 5}) {
    QueryMatrix c = cube_rows(d);
    for (std::size_t j = 0; j < c.cols(); ++j) CHECK(c.entry(0, j) == 1.0);
    std::set<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      std::vector<double> row(c.cols());
      for (std::size_t j = 0; j < c.cols(); ++j) row[j] = c.entry(i, j);
      rows.insert(row);
    }
    CHECK(rows.size() == c.rows());
  }
  CHECK_THROWS(cube_rows(0));
  CHECK_THROWS(cube_rows(25));
}

TEST_CASE("condition_number basics") {
  QueryMatrix id = identity2();
  CHECK(condition_number(id) == Catch::Approx(1.0).epsilon(1e-12));

  QueryMatrix diag(2, 2, 1.0);
  diag.set_raw(0, 0, 2);
  diag.set_raw(1, 1, 1);
  CHECK(condition_number(diag) == Catch::Approx(2.0).epsilon(1e-12));

  QueryMatrix deficient(2, 2, 1.0);
  deficient.set_raw(0, 0, 1);
  deficient.set_raw(0, 1, 1);
  deficient.set_raw(1, 0, 1);
  deficient.set_raw(1, 1, 1);
  CHECK(std::isinf(condition_number(deficient)));
}

TEST_CASE("hard-instance-shaped matrix at d=8 has kappa <= 10") {
  // At d = 8 the greedy selection is empty, so x = 0 and every row scale
  // equals round((5 sqrt(8))^{1/p} / grain); the resulting matrix is a
  // uniformly rescaled cube matrix with orthogonal columns.
  int d = 8;
  double p = 1.0;
  double shift = 5.0 * std::sqrt(8.0);
  double grain = 1.0 / (p * std::pow(8.0 * std::sqrt(8.0), 1.0 - 1.0 / p) * 256.0);
  std::int64_t k = std::llround(std::pow(shift, 1.0 / p) / grain);
  QueryMatrix cube = cube_rows(d);
  QueryMatrix a(256, 8, grain);
  for (std::size_t j = 0; j < 256; ++j)
    for (std::size_t col = 0; col < 8; ++col)
      a.set_raw(j, col, cube.entry(j, col) > 0 ? k : -k);
  double kappa = condition_number(a);
  CHECK(kappa >= 1.0);
  CHECK(kappa <= 10.0);
}

TEST_CASE("query matrix text round trip") {
  QueryMatrix a(3, 2, 0.125);
  a.set_raw(0, 0, -4);
  a.set_raw(0, 1, 9);
  a.set_raw(1, 0, 0);
  a.set_raw(1, 1, 123456789);
  a.set_raw(2, 0, 7);
  a.set_raw(2, 1, -7);
  std::stringstream buf;
  a.write_text(buf);
  QueryMatrix b = QueryMatrix::read_text(buf);
  REQUIRE(b.rows() == a.rows());
  REQUIRE(b.cols() == a.cols());
  CHECK(b.grain() == a.grain());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) CHECK(b.raw(i, j) == a.raw(i, j));
}

TEST_CASE("query matrix multiply agrees with entries") {
  QueryMatrix a(2, 3, 0.5);
  std::int64_t vals[2][3] = {{1, -2, 3}, {4, 0, -6}};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) a.set_raw(i, j, vals[i][j]);
  auto y = a.multiply({1.0, 2.0, 3.0});
  CHECK(y[0] == Catch::Approx(0.5 * (1 - 4 + 9)));
  CHECK(y[1] == Catch::Approx(0.5 * (4 + 0 - 18)));
}

TEST_CASE("rng streams are deterministic and independent") {
  RngStream a(123, "label");
  RngStream b(123, "label");
  for (int i = 0; i < 32; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(123, "label");
  RngStream d(123, "other");
  int same = 0;
  for (int i = 0; i < 32; ++i) same += (c.next_u64() == d.next_u64()) ? 1 : 0;
  CHECK(same == 0);

  RngStream parent(9, "parent");
  RngStream d0 = parent.derive(std::uint64_t{0});
  RngStream d1 = parent.derive(std::uint64_t{1});
  RngStream d0_again = parent.derive(std::uint64_t{0});
  CHECK(d0.next_u64() == d0_again.next_u64());
  CHECK(d0.next_u64() != d1.next_u64());
}

TEST_CASE("rng distributions have sane moments") {
  RngStream rng(2024, "moments");
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = rng.next_normal();
    sum += g;
    sumsq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sumsq / n == Catch::Approx(1.0).epsilon(0.02));

  double umin = 1.0, umax = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = rng.next_double();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  CHECK(umin >= 0.0);
  CHECK(umax < 1.0);

  // Cauchy absolute median is 1 (quantile identity used by the l1 sketch).
  std::vector<double> cau(100001);
  for (auto& v : cau) v = std::abs(rng.next_cauchy());
  std::nth_element(cau.begin(), cau.begin() + 50000, cau.end());
  CHECK(cau[50000] == Catch::Approx(1.0).epsilon(0.03));
}

TEST_CASE("kernel spot values and shared invariants") {
  CHECK(KernelFunction::power(0.5).eval(0.0) == 0.0);
  CHECK(KernelFunction::power(2.0).eval(0.0) == 0.0);
  CHECK(KernelFunction::power(1.5).eval(-2.0) ==
        Catch::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));

  CHECK(KernelFunction::zero_indicator().eval(0.0) == 0.0);
  CHECK(KernelFunction::zero_indicator().eval(-3.0) == 1.0);

  CHECK(KernelFunction::log_abs().eval(std::exp(1.0)) == Catch::Approx(1.0));
  CHECK(KernelFunction::log_abs().eval(0.5) == 0.0);
  CHECK(KernelFunction::log_abs().eval(1.0) == 0.0);

  CHECK(KernelFunction::tukey(1.0, 2.0).eval(1.0) == 1.0);
  CHECK(KernelFunction::tukey(1.0, 2.0).eval(3.0) == 2.0);

  CHECK(KernelFunction::huber(1.0).eval(0.5) == Catch::Approx(0.125));
  CHECK(KernelFunction::huber(1.0).eval(2.0) == Catch::Approx(1.5));

  CHECK(KernelFunction::fair(2.0).eval(2.0) ==
        Catch::Approx(4.0 * (1.0 - std::log(2.0))).epsilon(1e-14));
  CHECK(KernelFunction::cauchy(1.0).eval(1.0) ==
        Catch::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(KernelFunction::l1l2().eval(0.0) == 0.0);
  CHECK(KernelFunction::l1l2().eval(2.0) ==
        Catch::Approx(2.0 * (std::sqrt(3.0) - 1.0)).epsilon(1e-14));

  std::vector<KernelFunction> kernels{
      KernelFunction::power(0.5),  KernelFunction::power(1.0),
      KernelFunction::power(2.0),  KernelFunction::zero_indicator(),
      KernelFunction::log_abs(),   KernelFunction::tukey(1.5, 1.0),
      KernelFunction::huber(0.7),  KernelFunction::fair(1.3),
      KernelFunction::cauchy(2.0), KernelFunction::l1l2(),
      KernelFunction::mollified_tukey1(1.0)};
  RngStream rng(5, "kernels");
  for (const auto& k : kernels) {
    for (int i = 0; i < 50; ++i) {
      double t = 6.0 * (rng.next_double() - 0.5);
      double v = k.eval(t);
      CHECK(v >= 0.0);
      CHECK(v == Catch::Approx(k.eval(-t)).margin(1e-12));
    }
  }
}
