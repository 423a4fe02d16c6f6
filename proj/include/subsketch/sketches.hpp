#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subsketch {

// Shared query interface: a stored summary of A answering estimates of
// ||Ax||_p^p, with exact bit-size accounting of the stored payload.
class SubspaceSketch {
 public:
  virtual ~SubspaceSketch() = default;
  virtual double p() const = 0;
  virtual double epsilon() const = 0;
  // Non-negative estimate of ||Ax||_p^p; never mutates the sketch.
  virtual double query(const std::vector<double>& x) const = 0;
  // Stored numeric payload, counted at declared precision (64-bit doubles).
  virtual std::uint64_t size_bits() const = 0;
};

namespace detail {

constexpr int kEntryBits = 64;

inline Eigen::VectorXd to_vector(const std::vector<double>& x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(),
                                           static_cast<Eigen::Index>(x.size()));
}

// All multi-indices alpha >= 0 over `vars` variables with |alpha| = degree,
// in graded lexicographic order (within the single grade, lexicographically
// descending: (k,0,...,0) first, (0,...,0,k) last).
inline std::vector<std::vector<int>> monomials_of_degree(int vars, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(vars, 0);
  alpha[0] = degree;
  for (;;) {
    out.push_back(alpha);
    // Find the rightmost position (except the last) with a positive entry.
    int i = vars - 2;
    while (i >= 0 && alpha[i] == 0) --i;
    if (i < 0) break;
    // Move one unit right, sweeping everything after i back onto position i+1.
    int tail = alpha[vars - 1];
    alpha[i] -= 1;
    alpha[vars - 1] = 0;
    alpha[i + 1] = tail + 1;
    for (int j = i + 2; j < vars - 1; ++j) {
      alpha[i + 1] += alpha[j];
      alpha[j] = 0;
    }
  }
  return out;
}

inline double multinomial(int n, const std::vector<int>& alpha) {
  double v = std::lgamma(n + 1.0);
  for (int a : alpha) v -= std::lgamma(a + 1.0);
  return std::round(std::exp(v));
}

inline double monomial_power(const std::vector<double>& x,
                             const std::vector<int>& alpha) {
  double v = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (int k = 0; k < alpha[j]; ++k) v *= x[j];
  return v;
}

}  // namespace detail

// Stores A^T A (upper triangle); query(x) = x^T (A^T A) x, exact for p = 2.
class GramSketch final : public SubspaceSketch {
 public:
  explicit GramSketch(const Eigen::MatrixXd& a)
      : d_(a.cols()), gram_(a.transpose() * a) {}

  double p() const override { return 2.0; }
  double epsilon() const override { return 0.0; }

  double query(const std::vector<double>& x) const override {
    if (static_cast<Eigen::Index>(x.size()) != d_)
      throw std::invalid_argument("GramSketch::query: dimension mismatch");
    Eigen::VectorXd xv = detail::to_vector(x);
    return xv.dot(gram_ * xv);
  }

  std::uint64_t size_bits() const override {
    auto d = static_cast<std::uint64_t>(d_);
    return d * (d + 1) / 2 * detail::kEntryBits;
  }

  const Eigen::MatrixXd& gram() const { return gram_; }

 private:
  Eigen::Index d_;
  Eigen::MatrixXd gram_;
};

inline GramSketch build_gram_sketch(const Eigen::MatrixXd& a) {
  return GramSketch(a);
}

// Exact sketch for even p: lift x to the degree-p/2 monomial vector x' and
// store the Gram matrix of the lifted design matrix B, where
// B_{i,alpha} = multinomial(p/2; alpha) * A_i^alpha. Then
// (B x')_i = ((Ax)_i)^{p/2}, so query(x) = x'^T (B^T B) x' = ||Ax||_p^p.
class EvenMomentSketch final : public SubspaceSketch {
 public:
  static constexpr std::size_t kMonomialCap = 5000;

  EvenMomentSketch(const Eigen::MatrixXd& a, int p) : p_(p), d_(a.cols()) {
    if (p != 2 && p != 4 && p != 6)
      throw std::invalid_argument("EvenMomentSketch: p must be one of {2, 4, 6}");
    int half = p / 2;
    monomials_ = detail::monomials_of_degree(static_cast<int>(d_), half);
    if (monomials_.size() > kMonomialCap)
      throw std::invalid_argument(
          "EvenMomentSketch: monomial count C(d+p/2-1, p/2) exceeds cap 5000");
    Eigen::MatrixXd b(a.rows(), static_cast<Eigen::Index>(monomials_.size()));
    std::vector<double> row(static_cast<std::size_t>(d_));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < d_; ++j) row[static_cast<std::size_t>(j)] = a(i, j);
      for (std::size_t m = 0; m < monomials_.size(); ++m)
        b(i, static_cast<Eigen::Index>(m)) =
            detail::multinomial(half, monomials_[m]) *
            detail::monomial_power(row, monomials_[m]);
    }
    gram_ = b.transpose() * b;
  }

  double p() const override { return p_; }
  double epsilon() const override { return 0.0; }

  double query(const std::vector<double>& x) const override {
    if (static_cast<Eigen::Index>(x.size()) != d_)
      throw std::invalid_argument("EvenMomentSketch::query: dimension mismatch");
    Eigen::VectorXd lifted(static_cast<Eigen::Index>(monomials_.size()));
    for (std::size_t m = 0; m < monomials_.size(); ++m)
      lifted(static_cast<Eigen::Index>(m)) = detail::monomial_power(x, monomials_[m]);
    return lifted.dot(gram_ * lifted);
  }

  std::uint64_t size_bits() const override {
    auto m = static_cast<std::uint64_t>(monomials_.size());
    return m * (m + 1) / 2 * detail::kEntryBits;
  }

  std::size_t monomial_count() const { return monomials_.size(); }
  const std::vector<std::vector<int>>& monomials() const { return monomials_; }

 private:
  double p_;
  Eigen::Index d_;
  std::vector<std::vector<int>> monomials_;
  Eigen::MatrixXd gram_;
};

inline EvenMomentSketch build_even_moment_sketch(const Eigen::MatrixXd& a, int p) {
  return EvenMomentSketch(a, p);
}

}  // namespace subsketch
