#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "subsketch/coreset1d.hpp"
#include "subsketch/l1_sketch_2d.hpp"
#include "subsketch/rng.hpp"

using namespace subsketch;

namespace {

double exact_l1(const Eigen::MatrixXd& a, double x1, double x2) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    sum += std::abs(a(i, 0) * x1 + a(i, 1) * x2);
  return sum;
}

Eigen::MatrixXd random_2col(std::size_t n, RngStream& rng) {
  Eigen::MatrixXd a(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, 0) = rng.next_normal();
    a(i, 1) = rng.next_normal();
  }
  return a;
}

}  // namespace

TEST_CASE("coreset cost queries on tiny inputs") {
  Coreset1D single({{3.0, 2.0}}, 0.1, 2.0);
  CHECK(single.cost(3.0) == 0.0);
  CHECK(single.cost(1.0) == Catch::Approx(4.0));  // weight 2, distance 2
  CHECK(single.cost(5.5) == Catch::Approx(5.0));

  Coreset1D pair({{-1.0, 1.0}, {1.0, 1.0}}, 0.1, 2.0);
  CHECK(pair.cost(0.0) == 2.0);
  CHECK(pair.cost(-1.0) == 2.0);
  CHECK(pair.cost(1.0) == 2.0);
  CHECK(pair.cost(2.0) == Catch::Approx(4.0));
  CHECK(pair.cost(-3.0) == Catch::Approx(6.0));

  Coreset1D empty;
  CHECK(empty.cost(7.0) == 0.0);
  CHECK(empty.size() == 0);
}

TEST_CASE("coreset construction degenerate cases") {
  // all mass on one point collapses to a single representative
  Coreset1D c = build_coreset_1d({4.0, 4.0, 4.0}, {1.0, 2.0, 3.0}, 0.1);
  REQUIRE(c.size() == 1);
  CHECK(c.points()[0].position == 4.0);
  CHECK(c.points()[0].weight == 6.0);
  CHECK(c.total_weight() == 6.0);

  Coreset1D none = build_coreset_1d({}, {}, 0.1);
  CHECK(none.size() == 0);
  CHECK(none.cost(1.0) == 0.0);

  CHECK_THROWS_AS(build_coreset_1d({1.0}, {1.0, 2.0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_coreset_1d({1.0}, {0.0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_coreset_1d({1.0}, {-1.0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_coreset_1d({1.0}, {1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_coreset_1d({1.0}, {1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("coreset preserves 1-median costs within eps/2") {
  double eps = 0.1;
  RngStream rng(41, "coreset-random");
  std::size_t n = 10000;
  std::vector<double> pos(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = 10.0 * rng.next_cauchy();  // heavy tails stress the rings
    w[i] = 0.5 + rng.next_double();
  }
  Coreset1D core = build_coreset_1d(pos, w, eps);
  CHECK(core.size() < n / 4);

  auto exact_cost = [&](double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(pos[i] - c);
    return s;
  };
  for (int g = 0; g <= 100; ++g) {
    double c = -50.0 + g;  // spans far outside the data range too
    double exact = exact_cost(c);
    CHECK(core.cost(c) == Catch::Approx(exact).epsilon(eps / 2.0));
  }
}

TEST_CASE("two-dimensional sketch exact spot values") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, -1;
  L1Sketch2D sk = build_l1_2d_sketch(a, 0.1);
  CHECK(sk.query(2.0, 1.0) == Catch::Approx(4.0));  // |2+1| + |2-1|
  CHECK(sk.query(0.0, 0.0) == 0.0);
  CHECK(sk.query(1.0, 0.0) == Catch::Approx(2.0));
  CHECK(sk.query(0.0, 1.0) == Catch::Approx(2.0));

  // a zero first column routes everything through the stored scalar
  Eigen::MatrixXd z(1, 2);
  z << 0, 7;
  L1Sketch2D zk = build_l1_2d_sketch(z, 0.1);
  CHECK(zk.query(5.0, 0.0) == 0.0);
  CHECK(zk.query(0.0, 2.0) == Catch::Approx(14.0));
  CHECK(zk.query(3.0, -1.0) == Catch::Approx(7.0));
  CHECK(zk.a0_sum() == 7.0);
  CHECK(zk.col1_abs_sum() == 0.0);

  Eigen::MatrixXd single(1, 2);
  single << 2, 7;
  L1Sketch2D sk1 = build_l1_2d_sketch(single, 0.1);
  CHECK(sk1.query(1.0, 0.0) == Catch::Approx(2.0));
  CHECK(sk1.query(1.0, 1.0) == Catch::Approx(9.0));
  CHECK(sk1.query(-3.5, 1.0) == Catch::Approx(0.0).margin(1e-12));

  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(build_l1_2d_sketch(bad, 0.1), std::invalid_argument);
}

TEST_CASE("sign-split decomposition is exact before snapping") {
  // Rebuilding the query from the two coresets and the scalar reproduces
  // ||Ax||_1 exactly when every ring holds a single point (tiny n).
  Eigen::MatrixXd a(5, 2);
  a << 2, 3, -1, 4, 0, -2, 0.5, -1, -3, -5;
  RngStream rng(42, "decompose");
  for (int t = 0; t < 100; ++t) {
    double x1 = rng.next_normal(), x2 = rng.next_normal();
    double direct = exact_l1(a, x1, x2);
    double split = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
      double a1 = a(i, 0), a2 = a(i, 1);
      if (a1 == 0.0) {
        split += std::abs(a2 * x2);
      } else if (x2 != 0.0) {
        split += std::abs(a1) * std::abs(x2) * std::abs(x1 / x2 - (-a2 / a1));
      } else {
        split += std::abs(a1 * x1);
      }
    }
    CHECK(split == Catch::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("sketch is positively homogeneous") {
  RngStream rng(43, "homogeneous");
  Eigen::MatrixXd a = random_2col(200, rng);
  L1Sketch2D sk = build_l1_2d_sketch(a, 0.1);
  for (int t = 0; t < 100; ++t) {
    double x1 = rng.next_normal(), x2 = rng.next_normal();
    double base = sk.query(x1, x2);
    CHECK(sk.query(3.0 * x1, 3.0 * x2) == Catch::Approx(3.0 * base).epsilon(1e-10));
    CHECK(sk.query(-x1, -x2) == Catch::Approx(base).epsilon(1e-10));
  }
  CHECK(sk.query(5.0, 0.0) == Catch::Approx(5.0 * sk.query(1.0, 0.0)).epsilon(1e-12));
}

TEST_CASE("relative error stays below eps on a direction grid") {
  RngStream rng(44, "grid");
  std::size_t n = 10000;
  Eigen::MatrixXd a = random_2col(n, rng);
  for (double eps : {0.05, 0.1}) {
    L1Sketch2D sk = build_l1_2d_sketch(a, eps);
    double worst = 0.0;
    for (int g = 0; g < 1000; ++g) {
      double theta = 2.0 * M_PI * g / 1000.0;
      double x1 = std::cos(theta), x2 = std::sin(theta);
      double exact = exact_l1(a, x1, x2);
      double est = sk.query(x1, x2);
      worst = std::max(worst, std::abs(est - exact) / exact);
    }
    CHECK(worst <= eps);

    double size = static_cast<double>(sk.coreset_plus().size() +
                                      sk.coreset_minus().size());
    double logn = std::log(static_cast<double>(n));
    CHECK(size <= 4.0 * logn * logn / eps);
  }
}

TEST_CASE("coreset size grows slowly with n") {
  RngStream rng(45, "size-scaling");
  for (std::size_t n : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
    Eigen::MatrixXd a = random_2col(n, rng);
    L1Sketch2D sk = build_l1_2d_sketch(a, 0.1);
    double size = static_cast<double>(sk.coreset_plus().size() +
                                      sk.coreset_minus().size());
    double logn = std::log(static_cast<double>(n));
    CHECK(size * 0.1 / (logn * logn) <= 4.0);
  }
}
