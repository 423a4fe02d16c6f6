#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subsketch {

struct WeightedPoint {
  double position;
  double weight;
};

// Weighted point set on the line supporting O(log size) 1-median cost
// queries via prefix sums.
class Coreset1D {
 public:
  Coreset1D() : epsilon_(0.0), total_input_weight_(0.0) {}

  Coreset1D(std::vector<WeightedPoint> points, double epsilon,
            double total_input_weight)
      : points_(std::move(points)),
        epsilon_(epsilon),
        total_input_weight_(total_input_weight) {
    std::sort(points_.begin(), points_.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) {
                return a.position < b.position;
              });
    prefix_w_.resize(points_.size());
    prefix_wp_.resize(points_.size());
    double w = 0.0, wp = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      w += points_[i].weight;
      wp += points_[i].weight * points_[i].position;
      prefix_w_[i] = w;
      prefix_wp_[i] = wp;
    }
  }

  // Weighted 1-median cost sum_i w_i |pos_i - center|.
  double cost(double center) const {
    if (points_.empty()) return 0.0;
    // First index with position > center.
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(points_.begin(), points_.end(), center,
                         [](double c, const WeightedPoint& p) {
                           return c < p.position;
                         }) -
        points_.begin());
    double total_w = prefix_w_.back(), total_wp = prefix_wp_.back();
    double left_w = j > 0 ? prefix_w_[j - 1] : 0.0;
    double left_wp = j > 0 ? prefix_wp_[j - 1] : 0.0;
    return (center * left_w - left_wp) +
           ((total_wp - left_wp) - center * (total_w - left_w));
  }

  std::size_t size() const { return points_.size(); }
  double epsilon() const { return epsilon_; }
  double total_weight() const { return total_input_weight_; }
  const std::vector<WeightedPoint>& points() const { return points_; }

 private:
  std::vector<WeightedPoint> points_;
  double epsilon_;
  double total_input_weight_;
  std::vector<double> prefix_w_;
  std::vector<double> prefix_wp_;
};

namespace detail {

// Sorts and merges duplicate positions, summing weights.
inline std::vector<WeightedPoint> coalesce_points(
    const std::vector<double>& positions, const std::vector<double>& weights) {
  std::vector<WeightedPoint> pts(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    pts[i] = {positions[i], weights[i]};
  std::sort(pts.begin(), pts.end(),
            [](const WeightedPoint& a, const WeightedPoint& b) {
              return a.position < b.position;
            });
  std::vector<WeightedPoint> out;
  for (const auto& p : pts) {
    if (!out.empty() && out.back().position == p.position)
      out.back().weight += p.weight;
    else
      out.push_back(p);
  }
  return out;
}

}  // namespace detail

// Ring-snapping construction around the weighted median m: points inside a
// small inner ball collapse to their centroid; each geometric ring
// (radii growing by 1+eps/4) collapses to its weighted centroid. Movement
// of a ring point is at most (eps/4) of its distance to m, and the inner
// ball radius is sized so its total movement is at most (eps/4) cost(m),
// giving coreset cost within (1 +/- eps/2) of exact at every center.
inline Coreset1D build_coreset_1d(const std::vector<double>& positions,
                                  const std::vector<double>& weights,
                                  double eps) {
  if (positions.size() != weights.size())
    throw std::invalid_argument("build_coreset_1d: positions/weights size mismatch");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("build_coreset_1d: eps must be in (0, 1)");
  for (double w : weights)
    if (!(w > 0.0))
      throw std::invalid_argument("build_coreset_1d: weights must be positive");
  if (positions.empty()) return Coreset1D({}, eps, 0.0);

  std::vector<WeightedPoint> pts = detail::coalesce_points(positions, weights);
  double total_w = 0.0;
  for (const auto& p : pts) total_w += p.weight;

  // Weighted median: smallest position with cumulative weight >= W/2.
  double cum = 0.0;
  double median = pts.back().position;
  for (const auto& p : pts) {
    cum += p.weight;
    if (cum >= total_w / 2.0) {
      median = p.position;
      break;
    }
  }
  double cost_m = 0.0;
  for (const auto& p : pts) cost_m += p.weight * std::abs(p.position - median);
  if (cost_m == 0.0)
    return Coreset1D({{median, total_w}}, eps, total_w);

  double r0 = eps * cost_m / (8.0 * total_w);
  double growth = 1.0 + eps / 4.0;
  // Bucket key: 0 for the inner ball, otherwise (side, ring index).
  std::map<std::pair<int, int>, std::pair<double, double>> buckets;  // -> (w, w*pos)
  for (const auto& p : pts) {
    double dist = std::abs(p.position - median);
    std::pair<int, int> key{0, 0};
    if (dist > r0) {
      int side = p.position > median ? 1 : -1;
      int ring = static_cast<int>(
          std::floor(std::log(dist / r0) / std::log(growth)));
      if (ring < 0) ring = 0;
      key = {side, ring};
    }
    auto& b = buckets[key];
    b.first += p.weight;
    b.second += p.weight * p.position;
  }
  std::vector<WeightedPoint> reps;
  reps.reserve(buckets.size());
  for (const auto& [key, b] : buckets)
    reps.push_back({b.second / b.first, b.first});
  return Coreset1D(std::move(reps), eps, total_w);
}

}  // namespace subsketch
