#pragma once

// The lower-bound construction: truncate the kernel matrix to one eigenvalue
// magnitude, pick near-orthogonal rows greedily, encode random signs into a
// shifted and grid-rounded vector, and decode each sign from one exact (or
// adversarially perturbed) query answer.

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsketch/parallel.hpp"
#include "subsketch/query_matrix.hpp"
#include "subsketch/rng.hpp"
#include "subsketch/spectrum.hpp"
#include "subsketch/wht.hpp"

namespace subsketch {

class TruncatedKernelMatrix {
 public:
  TruncatedKernelMatrix(const GridSpectrum& spec, const SpectrumLevel& level)
      : d_(spec.d),
        n_(std::size_t{1} << spec.d),
        sigma_(level.sigma),
        rank_(level.multiplicity) {
    keep_.assign(n_, 0.0);
    std::vector<char> kept_weight(d_ + 1, 0);
    for (int w : level.weights) kept_weight[w] = 1;
    for (std::size_t s = 0; s < n_; ++s) {
      int w = static_cast<int>(std::popcount(s));
      if (kept_weight[w]) keep_[s] = spec.by_weight[w];
    }
  }

  int d() const { return d_; }
  std::size_t n() const { return n_; }
  double sigma() const { return sigma_; }
  std::int64_t rank() const { return rank_; }
  double row_norm() const {
    return sigma_ * std::sqrt(static_cast<double>(rank_) / static_cast<double>(n_));
  }

  // Row i of H diag(kept) H^T; the first transform of e_i is just a sign
  // pattern, so one explicit butterfly suffices.
  std::vector<double> row(std::size_t i) const {
    std::vector<double> v(n_);
    for (std::size_t s = 0; s < n_; ++s)
      v[s] = (std::popcount(i & s) & 1) ? -keep_[s] : keep_[s];
    fwht_raw(v.data(), n_);
    double inv = 1.0 / static_cast<double>(n_);
    for (double& x : v) x *= inv;
    return v;
  }

 private:
  int d_;
  std::size_t n_;
  double sigma_;
  std::int64_t rank_;
  std::vector<double> keep_;
};

// Keeps exactly the eigenvalues of magnitude |lambda0|.
inline TruncatedKernelMatrix truncate_spectrum(const GridSpectrum& spec) {
  if (spec.d % 2 != 0)
    throw std::invalid_argument("truncate_spectrum: d must be even");
  double scale = 0.0;
  for (double v : spec.by_weight) scale = std::max(scale, std::abs(v));
  if (std::abs(spec.lambda0) <= 1e-9 * scale)
    throw std::invalid_argument("truncate_spectrum: lambda0 is zero, no usable spectrum");
  SpectrumLevel level = dominant_level(spec);
  return TruncatedKernelMatrix(spec, level);
}

inline TruncatedKernelMatrix truncate_spectrum(const GridSpectrum& spec,
                                               const SpectrumLevel& level) {
  if (level.sigma <= 0.0)
    throw std::invalid_argument("truncate_spectrum: level magnitude is zero");
  return TruncatedKernelMatrix(spec, level);
}

struct OrthogonalizedRows {
  std::vector<std::size_t> indices;            // the selected set R
  std::vector<std::vector<double>> residuals;  // pairwise orthogonal R_i
  double row_norm;                             // common full-row norm
};

// Greedy selection: accept a row whenever the part of it orthogonal to the
// residuals chosen so far retains more than 0.99 of its squared norm; stop
// at floor(r/100) rows. Smallest-index-first scan order.
inline OrthogonalizedRows orthogonalize_rows(const TruncatedKernelMatrix& mt,
                                             std::int64_t r, double sigma) {
  std::size_t n = mt.n();
  double row_norm = sigma * std::sqrt(static_cast<double>(r) / static_cast<double>(n));
  std::size_t target = static_cast<std::size_t>(r / 100);
  OrthogonalizedRows out;
  out.row_norm = row_norm;
  if (target == 0) return out;  // level rank below 100 selects no rows (d = 8)
  std::vector<std::vector<double>> basis;  // normalized residuals
  for (std::size_t i = 0; i < n && out.indices.size() < target; ++i) {
    std::vector<double> res = mt.row(i);
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += res[k] * b[k];
      for (std::size_t k = 0; k < n; ++k) res[k] -= dot * b[k];
    }
    double sq = 0.0;
    for (double v : res) sq += v * v;
    if (sq > 0.99 * row_norm * row_norm) {
      out.indices.push_back(i);
      out.residuals.push_back(res);
      double inv = 1.0 / std::sqrt(sq);
      for (double& v : res) v *= inv;
      basis.push_back(std::move(res));
    }
  }
  if (out.indices.size() < target)
    throw std::runtime_error("orthogonalize_rows: ran out of qualifying rows");
  return out;
}

inline OrthogonalizedRows orthogonalize_rows(const TruncatedKernelMatrix& mt) {
  return orthogonalize_rows(mt, mt.rank(), mt.sigma());
}

struct HardInstance {
  int d;
  double p;
  std::vector<std::size_t> bit_indices;  // R, aligned with signs
  std::vector<int> signs;
  double shift;       // 5 sqrt(d)
  double grain;       // rounding grid delta
  std::vector<double> x;
  std::vector<double> ytilde;  // exact multiples of grain
  QueryMatrix a;               // 2^d x d, j-th row = ytilde_j * (cube row j)
  double row_sum;              // common row sum of the kernel matrix
  double sigma;
  std::int64_t level_rank;
  double row_norm;
};

namespace detail {

inline double hard_instance_row_sum(int d, double p) {
  auto c = binomial_table(d);
  double sum = 0.0;
  for (int i = 0; i <= d; ++i)
    sum += static_cast<double>(c[d][i]) *
           std::pow(std::abs(static_cast<double>(d - 2 * i)), p);
  return sum;
}

// x = sum_k signs[k] * residual_k / ||residual_k||, over n coordinates.
inline std::vector<double> combine_signed_residuals(
    const OrthogonalizedRows& orth, const std::vector<int>& signs,
    std::size_t n) {
  if (signs.size() != orth.residuals.size())
    throw std::invalid_argument("combine_signed_residuals: sign count mismatch");
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < orth.residuals.size(); ++k) {
    double sq = 0.0;
    for (double v : orth.residuals[k]) sq += v * v;
    double scale = signs[k] / std::sqrt(sq);
    const auto& res = orth.residuals[k];
    for (std::size_t j = 0; j < n; ++j) x[j] += scale * res[j];
  }
  return x;
}

inline HardInstance finish_hard_instance(int d, double p,
                                         const OrthogonalizedRows& orth,
                                         double sigma, std::int64_t rank,
                                         std::vector<int> signs,
                                         std::vector<double> x) {
  std::size_t n = std::size_t{1} << d;
  double sd = std::sqrt(static_cast<double>(d));
  double shift = 5.0 * sd;
  double grain = 1.0 / (p * std::pow(8.0 * sd, 1.0 - 1.0 / p) *
                        std::pow(2.0, static_cast<double>(d)));
  std::vector<double> ytilde(n);
  QueryMatrix a(n, static_cast<std::size_t>(d), grain);
  for (std::size_t j = 0; j < n; ++j) {
    double y = std::pow(x[j] + shift, 1.0 / p);
    std::int64_t k = std::llround(y / grain);
    ytilde[j] = static_cast<double>(k) * grain;
    for (int col = 0; col < d; ++col) {
      bool neg = (j >> (d - 1 - col)) & 1;
      a.set_raw(j, col, neg ? -k : k);
    }
  }
  return HardInstance{d,
                      p,
                      orth.indices,
                      std::move(signs),
                      shift,
                      grain,
                      std::move(x),
                      std::move(ytilde),
                      std::move(a),
                      hard_instance_row_sum(d, p),
                      sigma,
                      rank,
                      orth.row_norm};
}

// Explicit signs; rejects sign patterns that violate the max-norm guard
// instead of resampling.
inline HardInstance assemble_with_signs(int d, double p,
                                        const OrthogonalizedRows& orth,
                                        double sigma, std::int64_t rank,
                                        std::vector<int> signs) {
  std::vector<double> x =
      combine_signed_residuals(orth, signs, std::size_t{1} << d);
  double maxabs = 0.0;
  for (double v : x) maxabs = std::max(maxabs, std::abs(v));
  if (maxabs > 3.0 * std::sqrt(static_cast<double>(d)))
    throw std::invalid_argument("assemble_with_signs: max-norm guard violated");
  return finish_hard_instance(d, p, orth, sigma, rank, std::move(signs),
                              std::move(x));
}

// Random signs; resamples (up to 100 times) when the max-norm guard trips.
// Shared by the one-shot builder and the Monte-Carlo experiment.
inline HardInstance assemble_hard_instance(int d, double p,
                                           const OrthogonalizedRows& orth,
                                           double sigma, std::int64_t rank,
                                           RngStream& rng) {
  double sd = std::sqrt(static_cast<double>(d));
  std::vector<int> signs(orth.residuals.size());
  std::vector<double> x;
  int attempts = 0;
  for (;; ++attempts) {
    if (attempts >= 100)
      throw std::runtime_error(
          "build_hard_instance: 100 resamples exceeded the max-norm guard");
    for (auto& s : signs) s = rng.next_sign();
    x = combine_signed_residuals(orth, signs, std::size_t{1} << d);
    double maxabs = 0.0;
    for (double v : x) maxabs = std::max(maxabs, std::abs(v));
    if (maxabs <= 3.0 * sd) break;
  }
  return finish_hard_instance(d, p, orth, sigma, rank, std::move(signs),
                              std::move(x));
}

}  // namespace detail

inline HardInstance build_hard_instance(int d, double p, RngStream& rng) {
  if (d % 2 != 0 || d < 10 || d > 20)
    throw std::invalid_argument("build_hard_instance: d must be even, 10 <= d <= 20");
  if (!(p > 0.0) || (p == std::round(p) && std::llround(p) % 2 == 0))
    throw std::invalid_argument("build_hard_instance: p must be positive and not an even integer");
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  SpectrumLevel level = dominant_level(spec);
  TruncatedKernelMatrix mt = truncate_spectrum(spec, level);
  OrthogonalizedRows orth = orthogonalize_rows(mt, level.multiplicity, level.sigma);
  return detail::assemble_hard_instance(d, p, orth, level.sigma,
                                        level.multiplicity, rng);
}

// Deterministic variant with caller-chosen signs (one per selected bit).
inline HardInstance build_hard_instance(int d, double p,
                                        std::vector<int> signs) {
  if (d % 2 != 0 || d < 10 || d > 20)
    throw std::invalid_argument("build_hard_instance: d must be even, 10 <= d <= 20");
  if (!(p > 0.0) || (p == std::round(p) && std::llround(p) % 2 == 0))
    throw std::invalid_argument("build_hard_instance: p must be positive and not an even integer");
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  SpectrumLevel level = dominant_level(spec);
  TruncatedKernelMatrix mt = truncate_spectrum(spec, level);
  OrthogonalizedRows orth = orthogonalize_rows(mt, level.multiplicity, level.sigma);
  return detail::assemble_with_signs(d, p, orth, level.sigma,
                                     level.multiplicity, std::move(signs));
}

// Decode one sign from a query answer; ties break toward +1.
inline int recover_bit(double answer, const HardInstance& inst, std::size_t i) {
  bool member = false;
  for (std::size_t idx : inst.bit_indices) member |= (idx == i);
  if (!member) throw std::invalid_argument("recover_bit: index not in the selected set");
  return (answer - inst.shift * inst.row_sum) >= 0.0 ? 1 : -1;
}

struct NoiseModel {
  enum class Kind { exact, additive_adversarial, multiplicative };
  Kind kind;
  double parameter;  // additive magnitude, or multiplicative eps

  static NoiseModel exact() { return {Kind::exact, 0.0}; }
  static NoiseModel additive_adversarial(double magnitude) {
    return {Kind::additive_adversarial, magnitude};
  }
  static NoiseModel multiplicative(double eps) {
    return {Kind::multiplicative, eps};
  }
};

struct RecoveryResult {
  int d;
  double p;
  std::size_t bits;    // |R|
  std::size_t trials;
  double success_rate;
  std::vector<double> per_bit_rate;
  double sigma;
  std::int64_t level_rank;
  double row_norm;
  double additive_threshold;  // 0.1 row_norm, the noise bound of the analysis
};

// Exact query answer for cube row i: entries of A (cube row i) have magnitude
// ytilde_j |<cube_i, cube_j>|, and the inner product depends only on
// popcount(i xor j).
inline double exact_query_answer(const HardInstance& inst, std::size_t i) {
  int d = inst.d;
  std::size_t n = inst.ytilde.size();
  std::vector<double> lut(d + 1);
  for (int w = 0; w <= d; ++w)
    lut[w] = std::pow(std::abs(static_cast<double>(d - 2 * w)), inst.p);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    sum += std::pow(inst.ytilde[j], inst.p) * lut[std::popcount(i ^ j)];
  return sum;
}

inline RecoveryResult recovery_experiment(int d, double p, NoiseModel noise,
                                          std::size_t trials, RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("recovery_experiment: trials must be >= 1");
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  SpectrumLevel level = dominant_level(spec);
  TruncatedKernelMatrix mt = truncate_spectrum(spec, level);
  OrthogonalizedRows orth = orthogonalize_rows(mt, level.multiplicity, level.sigma);

  std::size_t n = std::size_t{1} << d;
  std::vector<double> lut(d + 1);
  for (int w = 0; w <= d; ++w)
    lut[w] = std::pow(std::abs(static_cast<double>(d - 2 * w)), p);

  RecoveryResult result;
  result.d = d;
  result.p = p;
  result.bits = orth.indices.size();
  result.trials = trials;
  result.sigma = level.sigma;
  result.level_rank = level.multiplicity;
  result.row_norm = orth.row_norm;
  result.additive_threshold = 0.1 * orth.row_norm;
  result.per_bit_rate.assign(result.bits, 0.0);

  double decode_shift = detail::hard_instance_row_sum(d, p) * 5.0 *
                        std::sqrt(static_cast<double>(d));
  // Trials fan out across workers; each worker fills its own slice of `hits`,
  // so the merge below is an order-independent sum.
  std::vector<std::uint8_t> hits(trials * result.bits, 0);
  parallel_for(trials, [&](std::size_t t) {
    RngStream trial_rng = rng.derive(t);
    HardInstance inst = detail::assemble_hard_instance(
        d, p, orth, level.sigma, level.multiplicity, trial_rng);
    std::vector<double> ytp(n);
    for (std::size_t j = 0; j < n; ++j) ytp[j] = std::pow(inst.ytilde[j], p);
    for (std::size_t k = 0; k < result.bits; ++k) {
      std::size_t i = inst.bit_indices[k];
      double exact = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        exact += ytp[j] * lut[std::popcount(i ^ j)];
      double answer = exact;
      int want = inst.signs[k];
      switch (noise.kind) {
        case NoiseModel::Kind::exact:
          break;
        case NoiseModel::Kind::additive_adversarial:
          answer = exact - want * noise.parameter;
          break;
        case NoiseModel::Kind::multiplicative: {
          // One-sided guarantee: the adversary may inflate by any factor in
          // [1, 1+eps] and picks whichever endpoint flips the decoding.
          double inflated = exact * (1.0 + noise.parameter);
          int g0 = (exact - decode_shift) >= 0.0 ? 1 : -1;
          int g1 = (inflated - decode_shift) >= 0.0 ? 1 : -1;
          answer = (g0 != want) ? exact : ((g1 != want) ? inflated : exact);
          break;
        }
      }
      int guess = (answer - decode_shift) >= 0.0 ? 1 : -1;
      if (guess == want) hits[t * result.bits + k] = 1;
    }
  });
  for (std::size_t t = 0; t < trials; ++t)
    for (std::size_t k = 0; k < result.bits; ++k)
      result.per_bit_rate[k] += hits[t * result.bits + k];
  double total = 0.0;
  for (double& r : result.per_bit_rate) {
    r /= static_cast<double>(trials);
    total += r;
  }
  result.success_rate = total / static_cast<double>(result.bits);
  return result;
}

// The multiplicative eps whose noise bound sits at `factor` times the
// threshold the analysis tolerates; factor = 100 is the negative control.
inline double multiplicative_eps_over_threshold(int d, double p, double factor) {
  GridSpectrum spec = fourier_spectrum(KernelFunction::power(p), d);
  SpectrumLevel level = dominant_level(spec);
  double n = std::pow(2.0, static_cast<double>(d));
  double row_norm = level.sigma * std::sqrt(static_cast<double>(level.multiplicity) / n);
  double query_bound = n * std::pow(8.0 * std::pow(static_cast<double>(d), 1.5), p);
  double eps = (factor * 0.1 * row_norm - std::pow(static_cast<double>(d), p)) / query_bound;
  return std::max(eps, 0.0);
}

// Stacks matrices with a shared grain into one block-diagonal matrix.
inline QueryMatrix block_diagonal(const std::vector<const QueryMatrix*>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_diagonal: no blocks");
  std::size_t n = 0, d = 0;
  double grain = blocks[0]->grain();
  for (const QueryMatrix* b : blocks) {
    if (b->grain() != grain)
      throw std::invalid_argument("block_diagonal: grain mismatch");
    n += b->rows();
    d += b->cols();
  }
  QueryMatrix out(n, d, grain);
  std::size_t ro = 0, co = 0;
  for (const QueryMatrix* b : blocks) {
    for (std::size_t i = 0; i < b->rows(); ++i)
      for (std::size_t j = 0; j < b->cols(); ++j)
        out.set_raw(ro + i, co + j, b->raw(i, j));
    ro += b->rows();
    co += b->cols();
  }
  return out;
}

}  // namespace subsketch
