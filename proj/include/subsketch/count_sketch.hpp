#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subsketch/rng.hpp"

namespace subsketch {

// Count-Sketch point-query structure: reps x buckets signed bucket sums.
// With B buckets the per-rep additive error is O(tail_l1 / B), and the
// median over an odd number of reps makes that hold for all indices at once
// with small failure probability.
class HeavyHitterSketch {
 public:
  HeavyHitterSketch(const std::vector<double>& x, std::size_t buckets,
                    std::size_t reps, RngStream& rng)
      : n_(x.size()), buckets_(buckets), reps_(reps) {
    if (buckets_ < 1 || reps_ < 1)
      throw std::invalid_argument("HeavyHitterSketch: buckets and reps must be >= 1");
    hash_keys_.resize(reps_);
    sign_keys_.resize(reps_);
    sums_.assign(reps_ * buckets_, 0.0);
    for (std::size_t r = 0; r < reps_; ++r) {
      hash_keys_[r] = rng.next_u64();
      sign_keys_[r] = rng.next_u64();
    }
    for (std::size_t r = 0; r < reps_; ++r)
      for (std::size_t i = 0; i < n_; ++i)
        if (x[i] != 0.0) sums_[r * buckets_ + bucket(r, i)] += sign(r, i) * x[i];
  }

  std::size_t bucket_count() const { return buckets_; }
  std::size_t rep_count() const { return reps_; }

  // Median (odd rep count: the center order statistic; even: lower middle)
  // of the per-rep unbiased point estimates.
  double estimate(std::size_t i) const {
    std::vector<double> vals(reps_);
    for (std::size_t r = 0; r < reps_; ++r)
      vals[r] = sign(r, i) * sums_[r * buckets_ + bucket(r, i)];
    std::size_t idx = (reps_ - 1) / 2;
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(idx),
                     vals.end());
    return vals[idx];
  }

 private:
  std::size_t bucket(std::size_t r, std::size_t i) const {
    return static_cast<std::size_t>(
        detail::mix64(hash_keys_[r] + i * detail::kGolden) % buckets_);
  }
  double sign(std::size_t r, std::size_t i) const {
    return (detail::mix64(sign_keys_[r] + i * detail::kGolden) >> 63) ? -1.0 : 1.0;
  }

  std::size_t n_;
  std::size_t buckets_;
  std::size_t reps_;
  std::vector<std::uint64_t> hash_keys_;
  std::vector<std::uint64_t> sign_keys_;
  std::vector<double> sums_;
};

namespace detail {

// l1 norm of x with the largest `top` magnitudes removed.
inline double tail_l1_norm(const std::vector<double>& x, std::size_t top) {
  std::vector<double> mag(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) mag[i] = std::abs(x[i]);
  if (top >= mag.size()) return 0.0;
  std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(top),
                   mag.end(), std::greater<double>());
  double sum = 0.0;
  for (std::size_t i = top; i < mag.size(); ++i) sum += mag[i];
  return sum;
}

inline std::size_t heavy_hitter_reps(std::size_t n) {
  double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  auto r = static_cast<std::size_t>(std::lround(lg));
  if (r % 2 == 0) ++r;
  return std::clamp<std::size_t>(r, 5, 21);
}

}  // namespace detail

// Indices whose Count-Sketch estimate clears (3/4)*beta*tail, where tail is
// the l1 norm of x outside its top ceil(1/beta) magnitudes. With ceil(8/beta)
// buckets the additive estimate error is about beta*tail/4, so every
// beta-heavy index clears the bar and nothing below beta/2-heavy does.
// Returns (index, estimate) pairs sorted by index.
inline std::vector<std::pair<std::size_t, double>> heavy_hitters(
    const std::vector<double>& x, double beta, RngStream& rng) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::invalid_argument("heavy_hitters: beta must be in (0, 1)");
  std::size_t top = static_cast<std::size_t>(std::ceil(1.0 / beta));
  double tail = detail::tail_l1_norm(x, top);
  auto buckets = static_cast<std::size_t>(std::ceil(8.0 / beta));
  std::size_t reps = detail::heavy_hitter_reps(x.size());
  HeavyHitterSketch sketch(x, buckets, reps, rng);
  double threshold = 0.75 * beta * tail;
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double est = sketch.estimate(i);
    if (std::abs(est) >= threshold && est != 0.0) out.emplace_back(i, est);
  }
  return out;
}

}  // namespace subsketch
