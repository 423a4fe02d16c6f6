#pragma once

// The n x d input matrix. Entries are stored as signed integers times an
// explicit grain so that grid rounding is exact rather than a floating-point
// afterthought; all arithmetic materializes entries as integer * grain.

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "subsketch/kernels.hpp"

namespace subsketch {

class QueryMatrix {
 public:
  QueryMatrix(std::size_t n, std::size_t d, double grain)
      : n_(n), d_(d), grain_(grain), raw_(n * d, 0) {
    if (n < 1 || d < 1) throw std::invalid_argument("QueryMatrix: n and d must be >= 1");
    if (!(grain > 0.0)) throw std::invalid_argument("QueryMatrix: grain must be positive");
  }

  static QueryMatrix from_integers(std::size_t n, std::size_t d, double grain,
                                   std::vector<std::int64_t> raw) {
    QueryMatrix m(n, d, grain);
    if (raw.size() != n * d)
      throw std::invalid_argument("QueryMatrix: entry count mismatch");
    m.raw_ = std::move(raw);
    return m;
  }

  // Rounds each value to the nearest grain multiple.
  static QueryMatrix from_reals(std::size_t n, std::size_t d, double grain,
                                const std::vector<double>& values) {
    QueryMatrix m(n, d, grain);
    if (values.size() != n * d)
      throw std::invalid_argument("QueryMatrix: entry count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
      m.raw_[i] = std::llround(values[i] / grain);
    return m;
  }

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return d_; }
  double grain() const { return grain_; }

  std::int64_t raw(std::size_t i, std::size_t j) const { return raw_[i * d_ + j]; }
  void set_raw(std::size_t i, std::size_t j, std::int64_t v) { raw_[i * d_ + j] = v; }
  double entry(std::size_t i, std::size_t j) const { return raw_[i * d_ + j] * grain_; }

  std::vector<double> multiply(const std::vector<double>& x) const {
    if (x.size() != d_) throw std::invalid_argument("QueryMatrix: dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      const std::int64_t* row = raw_.data() + i * d_;
      for (std::size_t j = 0; j < d_; ++j) acc += row[j] * x[j];
      out[i] = acc * grain_;
    }
    return out;
  }

  // Text format: first line "n d grain", then n lines of d integers.
  static QueryMatrix read_text(std::istream& in) {
    std::size_t n = 0, d = 0;
    double grain = 0.0;
    if (!(in >> n >> d >> grain))
      throw std::invalid_argument("QueryMatrix: malformed header line");
    QueryMatrix m(n, d, grain);
    for (std::size_t i = 0; i < n * d; ++i)
      if (!(in >> m.raw_[i]))
        throw std::invalid_argument("QueryMatrix: truncated entry list");
    return m;
  }

  void write_text(std::ostream& out) const {
    out.precision(17);
    out << n_ << ' ' << d_ << ' ' << grain_ << '\n';
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < d_; ++j)
        out << raw_[i * d_ + j] << (j + 1 == d_ ? '\n' : ' ');
    }
  }

 private:
  std::size_t n_, d_;
  double grain_;
  std::vector<std::int64_t> raw_;
};

// All 2^d sign vectors; column k of row j carries bit d-1-k of j, so row 0 is
// all ones and the first column varies slowest.
inline QueryMatrix cube_rows(int d) {
  if (d < 1 || d > 24) throw std::invalid_argument("cube_rows: d must be in [1, 24]");
  std::size_t n = std::size_t{1} << d;
  QueryMatrix m(n, static_cast<std::size_t>(d), 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (int k = 0; k < d; ++k)
      m.set_raw(j, k, ((j >> (d - 1 - k)) & 1) ? -1 : 1);
  return m;
}

// Exact evaluation oracle: sum of kernel values over the entries of Ax.
inline double phi_norm(const QueryMatrix& a, const std::vector<double>& x,
                       const KernelFunction& kernel) {
  std::vector<double> ax = a.multiply(x);
  double sum = 0.0;
  for (double v : ax) sum += kernel.eval(v);
  return sum;
}

}  // namespace subsketch
