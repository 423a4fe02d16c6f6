#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subsketch {

// In-place unnormalized Walsh-Hadamard butterfly, length must be a power of
// two. Applying it twice multiplies the input by the length.
inline void fwht_raw(double* v, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        double a = v[j];
        double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

// Orthogonal (normalized) transform: involution, preserves the l2 norm.
inline std::vector<double> walsh_hadamard(std::vector<double> v) {
  std::size_t n = v.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("walsh_hadamard: length must be a power of two");
  fwht_raw(v.data(), n);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& x : v) x *= scale;
  return v;
}

}  // namespace subsketch
