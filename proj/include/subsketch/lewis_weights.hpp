#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "subsketch/rng.hpp"
#include "subsketch/sketches.hpp"

namespace subsketch {

struct LewisWeights {
  std::vector<double> w;
  double p;
  int iterations;
  double final_residual;
};

// Row leverage scores via a thin QR factor: w_i = ||row i of Q||^2.
inline std::vector<double> leverage_scores(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  std::vector<double> w(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    w[static_cast<std::size_t>(i)] = q.row(i).squaredNorm();
  return w;
}

// Fixed-point iteration w <- (a_i^T (A^T W^{1-2/p} A)^{-1} a_i)^{p/2} from
// w = (d/n)*1, run until the residual max_i |w_i - update_i| drops to 1e-8.
// If the residual ever increases, later updates are damped by a geometric
// half-step, which keeps the iteration stable as p approaches 4.
inline LewisWeights compute_lewis_weights(const Eigen::MatrixXd& a, double p) {
  if (!(p > 0.0) || !(p < 4.0))
    throw std::invalid_argument("compute_lewis_weights: p must be in (0, 4)");
  Eigen::Index n = a.rows(), d = a.cols();
  if (n < d) throw std::invalid_argument("compute_lewis_weights: A has fewer rows than columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(a);
  if (rank_check.rank() < d)
    throw std::invalid_argument("compute_lewis_weights: A is rank deficient");

  const double expo = 1.0 - 2.0 / p;
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 500;

  std::vector<double> w(static_cast<std::size_t>(n),
                        static_cast<double>(d) / static_cast<double>(n));
  std::vector<double> update(static_cast<std::size_t>(n));
  double prev_residual = std::numeric_limits<double>::infinity();
  bool damped = false;
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double wi = w[static_cast<std::size_t>(i)];
      scale(i) = wi > 0.0 ? std::pow(wi, expo) : 0.0;
    }
    Eigen::MatrixXd m = a.transpose() * scale.asDiagonal() * a;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("compute_lewis_weights: normal matrix factorization failed");
    Eigen::MatrixXd minv = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
    double residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double tau = a.row(i) * minv * a.row(i).transpose();
      if (!std::isfinite(tau) || tau < 0.0)
        throw std::runtime_error("compute_lewis_weights: iteration produced invalid quadratic form");
      double u = std::pow(tau, p / 2.0);
      update[static_cast<std::size_t>(i)] = u;
      residual = std::max(residual, std::abs(w[static_cast<std::size_t>(i)] - u));
    }
    if (residual <= kTol)
      return LewisWeights{std::move(w), p, iter, residual};
    if (residual > prev_residual) damped = true;
    prev_residual = residual;
    if (damped) {
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::sqrt(w[i] * update[i]);
    } else {
      w = update;
    }
  }
  std::ostringstream msg;
  msg << "compute_lewis_weights: no convergence in " << kMaxIter
      << " iterations; last residual " << prev_residual;
  throw std::runtime_error(msg.str());
}

// m rows drawn i.i.d. with probability q_i = w_i/d, row i rescaled by
// (1/(m q_i))^{1/p}; query(x) = ||S A x||_p^p, an unbiased estimate of
// ||Ax||_p^p.
class SamplingSketch final : public SubspaceSketch {
 public:
  SamplingSketch(const Eigen::MatrixXd& a, double p, std::size_t m,
                 const LewisWeights& lw, RngStream& rng)
      : p_(p) {
    if (m < 1) throw std::invalid_argument("SamplingSketch: m must be >= 1");
    if (lw.w.size() != static_cast<std::size_t>(a.rows()))
      throw std::invalid_argument("SamplingSketch: weight count mismatch");
    double d = static_cast<double>(a.cols());
    std::vector<double> cdf(lw.w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < lw.w.size(); ++i) {
      acc += lw.w[i] / d;
      cdf[i] = acc;
    }
    // Normalize away the 1e-6-level slack in sum(w) = d.
    for (double& c : cdf) c /= acc;
    rows_ = Eigen::MatrixXd(static_cast<Eigen::Index>(m), a.cols());
    for (std::size_t k = 0; k < m; ++k) {
      double u = rng.next_double();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::size_t i = std::min<std::size_t>(
          static_cast<std::size_t>(it - cdf.begin()), lw.w.size() - 1);
      double qi = lw.w[i] / (d * acc);
      rows_.row(static_cast<Eigen::Index>(k)) =
          a.row(static_cast<Eigen::Index>(i)) *
          std::pow(1.0 / (static_cast<double>(m) * qi), 1.0 / p);
    }
  }

  double p() const override { return p_; }
  double epsilon() const override { return std::numeric_limits<double>::quiet_NaN(); }

  double query(const std::vector<double>& x) const override {
    if (static_cast<Eigen::Index>(x.size()) != rows_.cols())
      throw std::invalid_argument("SamplingSketch::query: dimension mismatch");
    Eigen::VectorXd v = rows_ * detail::to_vector(x);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      sum += std::pow(std::abs(v(i)), p_);
    return sum;
  }

  std::uint64_t size_bits() const override {
    return static_cast<std::uint64_t>(rows_.rows()) *
           static_cast<std::uint64_t>(rows_.cols()) * detail::kEntryBits;
  }

  std::size_t sample_count() const { return static_cast<std::size_t>(rows_.rows()); }

 private:
  double p_;
  Eigen::MatrixXd rows_;
};

inline SamplingSketch build_sampling_sketch(const Eigen::MatrixXd& a, double p,
                                            std::size_t m, RngStream& rng) {
  LewisWeights lw = compute_lewis_weights(a, p);
  return SamplingSketch(a, p, m, lw, rng);
}

inline SamplingSketch build_sampling_sketch(const Eigen::MatrixXd& a, double p,
                                            std::size_t m, const LewisWeights& lw,
                                            RngStream& rng) {
  return SamplingSketch(a, p, m, lw, rng);
}

}  // namespace subsketch
