#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "subsketch/rng.hpp"
#include "subsketch/sketches.hpp"

namespace subsketch {

namespace detail {

// Median convention used throughout: for even counts, the lower middle order
// statistic. (r-1)/2 is the center for odd r and the lower middle for even r.
inline double median_abs(std::vector<double>& v) {
  for (double& x : v) x = std::abs(x);
  std::size_t idx = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
  return v[idx];
}

// Median of |standard p-stable|. Exactly 1 for p = 1 (the standard Cauchy
// quantile tan(pi/4)); otherwise estimated once per p by Monte-Carlo with
// 10^7 samples from a fixed seed, and cached.
inline double stable_median_scale(double p) {
  if (p == 1.0) return 1.0;
  static std::map<double, double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  RngStream rng(UINT64_C(0x7374616273636c65), "stable-median-scale");
  RngStream draw = rng.derive(static_cast<std::uint64_t>(std::llround(p * 1e6)));
  constexpr std::size_t kSamples = 10'000'000;
  std::vector<double> s(kSamples);
  for (auto& v : s) v = std::abs(draw.next_stable(p));
  std::size_t idx = (kSamples - 1) / 2;
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(idx), s.end());
  double scale = s[idx];
  cache.emplace(p, scale);
  return scale;
}

}  // namespace detail

// r x n matrix S of i.i.d. standard p-stable entries, applied to A at build
// time; only SA is retained. query(x) = (med|SAx| / median_scale)^p.
class StableSketch final : public SubspaceSketch {
 public:
  StableSketch(const Eigen::MatrixXd& a, double p, double eps, RngStream& rng)
      : p_(p), eps_(eps) {
    if (!(p > 0.0) || p > 2.0)
      throw std::invalid_argument("StableSketch: p must be in (0, 2]");
    if (!(eps > 0.0) || eps >= 1.0)
      throw std::invalid_argument("StableSketch: eps must be in (0, 1)");
    r_ = static_cast<std::size_t>(std::ceil(kRowConstant / (eps * eps)));
    median_scale_ = detail::stable_median_scale(p);
    Eigen::Index n = a.rows(), d = a.cols();
    sa_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r_), d);
    for (std::size_t k = 0; k < r_; ++k)
      for (Eigen::Index j = 0; j < n; ++j) {
        double s = rng.next_stable(p);
        sa_.row(static_cast<Eigen::Index>(k)) += s * a.row(j);
      }
  }

  // Tuned leading constant in r = ceil(c / eps^2).
  static constexpr double kRowConstant = 50.0;

  double p() const override { return p_; }
  double epsilon() const override { return eps_; }
  std::size_t rows() const { return r_; }
  double median_scale() const { return median_scale_; }

  double query(const std::vector<double>& x) const override {
    if (static_cast<Eigen::Index>(x.size()) != sa_.cols())
      throw std::invalid_argument("StableSketch::query: dimension mismatch");
    Eigen::VectorXd v = sa_ * detail::to_vector(x);
    std::vector<double> abs(v.data(), v.data() + v.size());
    double med = detail::median_abs(abs);
    return std::pow(med / median_scale_, p_);
  }

  std::uint64_t size_bits() const override {
    return static_cast<std::uint64_t>(r_) *
           static_cast<std::uint64_t>(sa_.cols()) * detail::kEntryBits;
  }

 private:
  double p_;
  double eps_;
  std::size_t r_;
  double median_scale_;
  Eigen::MatrixXd sa_;
};

inline StableSketch build_stable_sketch(const Eigen::MatrixXd& a, double p,
                                        double eps, RngStream& rng) {
  return StableSketch(a, p, eps, rng);
}

}  // namespace subsketch
