#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "subsketch/incoherent.hpp"
#include "subsketch/rng.hpp"

using namespace subsketch;

namespace {

double pair_coherence(const IncoherentSet& set) {
  double worst = 0.0;
  for (std::size_t a = 0; a < set.vectors.size(); ++a)
    for (std::size_t b = a + 1; b < set.vectors.size(); ++b) {
      long long dot = 0;
      for (int k = 0; k < set.d; ++k) dot += set.vectors[a][k] * set.vectors[b][k];
      worst = std::max(worst, static_cast<double>(std::llabs(dot)));
    }
  return worst;
}

}  // namespace

TEST_CASE("sampling respects the coherence bound") {
  RngStream rng(1, "incoherent");
  IncoherentSet set = sample_incoherent_set(64, 100, rng);
  REQUIRE(set.vectors.size() == 100);
  for (const auto& v : set.vectors) {
    REQUIRE(v.size() == 64);
    for (int e : v) CHECK((e == 1 || e == -1));
  }
  double bound = 3.0 * std::sqrt(64.0 * std::log(100.0));
  CHECK(set.coherence <= bound);
  CHECK(set.coherence == pair_coherence(set));

  // a singleton set has nothing to clash with
  RngStream rng1(2, "single");
  IncoherentSet one = sample_incoherent_set(16, 1, rng1);
  CHECK(one.vectors.size() == 1);
  CHECK(one.coherence == 0.0);

  RngStream rng2(3, "pair");
  IncoherentSet two = sample_incoherent_set(32, 2, rng2);
  CHECK(two.coherence <= 3.0 * std::sqrt(32.0 * std::log(2.0)));
}

TEST_CASE("sampling rejects oversized families") {
  RngStream rng(4, "oversize");
  // 2^{16/4} = 16 < 17
  CHECK_THROWS_AS(sample_incoherent_set(16, 17, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_incoherent_set(64, 0, rng), std::invalid_argument);
}

TEST_CASE("row budget shrinks with coherence and never hits zero") {
  CHECK(choose_distinguishing_rows(64, 2.0, 30.0) == 1);
  CHECK(choose_distinguishing_rows(64, 2.0, 8.0) ==
        static_cast<std::int64_t>(std::pow(8.0, 2.0) / std::pow(3.0, 2.0)));
  CHECK(choose_distinguishing_rows(64, 2.0, 1000.0) == 1);  // clamp
  CHECK(choose_distinguishing_rows(64, 4.0, 8.0) >=
        choose_distinguishing_rows(64, 4.0, 12.0));
}

TEST_CASE("one differing row separates the two matrices") {
  RngStream rng(9, "distinguish");
  IncoherentSet set = sample_incoherent_set(64, 100, rng);
  std::int64_t rows = choose_distinguishing_rows(64, 2.0, set.coherence);
  double dp = std::pow(64.0, 2.0);
  for (int rep = 0; rep < 25; ++rep) {
    RngStream trial = rng.derive(rep);
    DistinguishResult res = distinguishing_experiment(set, 2.0, rows, trial);
    CHECK(res.separation);
    CHECK(res.planted >= dp);          // the planted row contributes d^p alone
    CHECK(res.foreign <= res.threshold);
    CHECK(res.threshold < dp);
    CHECK(res.rows == rows);
    CHECK(res.effective_c > 1.0);
  }
}

TEST_CASE("experiment preconditions") {
  RngStream rng(10, "precond");
  IncoherentSet set = sample_incoherent_set(64, 20, rng);
  RngStream trial = rng.derive(0);
  CHECK_THROWS_AS(distinguishing_experiment(set, 1.5, 1, trial),
                  std::invalid_argument);  // needs p >= 2
  CHECK_THROWS_AS(distinguishing_experiment(set, 2.0, 20, trial),
                  std::invalid_argument);  // needs rows+1 vectors
  CHECK_THROWS_AS(distinguishing_experiment(set, 2.0, 0, trial),
                  std::invalid_argument);
}
