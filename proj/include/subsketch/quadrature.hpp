#pragma once

// Shared numerical helpers: Gauss-Legendre rules, composite integration,
// and Chebyshev interpolation with Clenshaw evaluation.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace subsketch::detail {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence.
inline GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

template <typename F>
double integrate_gl(F&& f, double a, double b, int order = 32) {
  const GaussRule& rule = gauss_rule(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

template <typename F>
double integrate_composite(F&& f, double a, double b, int panels,
                           int order = 16) {
  double sum = 0.0;
  double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k)
    sum += integrate_gl(f, a + k * h, a + (k + 1) * h, order);
  return sum;
}

// Chebyshev interpolation coefficients of f on [a, b] at degree deg
// (deg + 1 extremum nodes).
template <typename F>
std::vector<double> fit_chebyshev(F&& f, double a, double b, int deg) {
  int n = deg + 1;
  std::vector<double> fx(n);
  for (int k = 0; k < n; ++k) {
    double theta = std::numbers::pi * k / deg;
    double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
    fx[k] = f(x);
  }
  std::vector<double> c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double sum = 0.5 * (fx[0] + (j % 2 == 0 ? fx[deg] : -fx[deg]));
    for (int k = 1; k < deg; ++k)
      sum += fx[k] * std::cos(std::numbers::pi * j * k / deg);
    c[j] = 2.0 * sum / deg;
  }
  c[0] *= 0.5;
  if (deg >= 1) c[deg] *= 0.5;
  return c;
}

inline double clenshaw(const std::vector<double>& c, double a, double b,
                       double x) {
  double u = (2.0 * x - a - b) / (b - a);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) {
    double t = 2.0 * u * b1 - b2 + c[j];
    b2 = b1;
    b1 = t;
  }
  return u * b1 - b2 + c[0];
}

}  // namespace subsketch::detail
