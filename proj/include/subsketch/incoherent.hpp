#pragma once

// Incoherent sign-vector families and the one-row distinguishing experiment
// built on them: a matrix must "notice" whether its own planted row is the
// query, because the planted inner product d dominates anything R foreign
// rows can contribute at bounded coherence.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "subsketch/rng.hpp"

namespace subsketch {

struct IncoherentSet {
  int d;
  std::vector<std::vector<int>> vectors;  // entries in {-1, +1}
  double coherence;                       // max |<s,t>| over distinct pairs
};

// Rejection-samples sign vectors until m of them are pairwise incoherent:
// |<s,t>| <= 3 sqrt(d ln m). Aborts after 10 m^2 rejections.
inline IncoherentSet sample_incoherent_set(int d, std::size_t m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("sample_incoherent_set: m must be >= 1");
  if (static_cast<double>(m) > std::pow(2.0, d / 4.0))
    throw std::invalid_argument("sample_incoherent_set: m exceeds 2^{d/4}");
  double bound = m >= 2 ? 3.0 * std::sqrt(d * std::log(static_cast<double>(m)))
                        : static_cast<double>(d);
  IncoherentSet set{d, {}, 0.0};
  std::size_t rejections = 0;
  std::vector<int> cand(d);
  while (set.vectors.size() < m) {
    for (int k = 0; k < d; ++k) cand[k] = rng.next_sign();
    bool ok = true;
    double worst = 0.0;
    for (const auto& v : set.vectors) {
      long long dot = 0;
      for (int k = 0; k < d; ++k) dot += cand[k] * v[k];
      double a = static_cast<double>(std::llabs(dot));
      worst = std::max(worst, a);
      if (a > bound) {
        ok = false;
        break;
      }
    }
    if (ok) {
      set.vectors.push_back(cand);
      set.coherence = std::max(set.coherence, worst);
    } else if (++rejections > 10 * m * m) {
      throw std::runtime_error("sample_incoherent_set: rejection budget exhausted");
    }
  }
  return set;
}

// Largest admissible row count for the separation at this coherence, with
// the analysis constant 3 folded in; never below 1.
inline std::int64_t choose_distinguishing_rows(int d, double p, double coherence) {
  double value = std::pow(static_cast<double>(d), p / 2.0) /
                 std::pow(3.0 * coherence / std::sqrt(static_cast<double>(d)), p);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(value));
}

struct DistinguishResult {
  bool separation;
  double planted;      // query norm against the matrix containing the row
  double foreign;      // query norm against the matrix without it
  double threshold;    // R * coherence^p, what foreign may reach
  double effective_c;  // C with foreign bound = (d/C)^p
  std::int64_t rows;
};

// Two R-row matrices from the set differing in exactly one row (the planted
// one, chosen by rng); checks planted >= d^p while foreign stays under
// R coherence^p < d^p.
inline DistinguishResult distinguishing_experiment(const IncoherentSet& set,
                                                   double p, std::int64_t rows,
                                                   RngStream& rng) {
  if (p < 2.0) throw std::invalid_argument("distinguishing_experiment: p must be >= 2");
  if (rows < 1 || set.vectors.size() < static_cast<std::size_t>(rows) + 1)
    throw std::invalid_argument("distinguishing_experiment: need at least rows+1 vectors");
  double d = static_cast<double>(set.d);
  double dp = std::pow(d, p);
  double limit = std::pow(d, p / 2.0) /
                 std::pow(set.coherence / std::sqrt(d), p);
  if (static_cast<double>(rows) > limit)
    throw std::invalid_argument("distinguishing_experiment: separation precondition unmet");

  std::size_t m = set.vectors.size();
  std::size_t planted_idx = rng.next_below(m);
  auto vec = [&](std::size_t off) -> const std::vector<int>& {
    return set.vectors[(planted_idx + off) % m];
  };
  const std::vector<int>& x = vec(0);
  auto powdot = [&](const std::vector<int>& v) {
    long long dot = 0;
    for (int k = 0; k < set.d; ++k) dot += v[k] * x[k];
    return std::pow(static_cast<double>(std::llabs(dot)), p);
  };
  double planted = 0.0, foreign = 0.0;
  for (std::int64_t k = 0; k < rows; ++k) planted += powdot(vec(k));
  for (std::int64_t k = 1; k <= rows; ++k) foreign += powdot(vec(k));
  double threshold = static_cast<double>(rows) * std::pow(set.coherence, p);
  DistinguishResult res;
  res.planted = planted;
  res.foreign = foreign;
  res.threshold = threshold;
  res.rows = rows;
  res.effective_c = set.coherence > 0.0
                        ? d / (std::pow(static_cast<double>(rows), 1.0 / p) * set.coherence)
                        : std::numeric_limits<double>::infinity();
  res.separation = planted >= dp && foreign <= threshold && threshold < dp;
  return res;
}

}  // namespace subsketch
