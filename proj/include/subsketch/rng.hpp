#pragma once

// Deterministic counter-based random streams. Every draw is a pure function
// of (key, counter), where the key folds in the user seed and a stream label,
// so any (seed, label) pair replays the same sequence on any platform. Child
// streams derive from a parent without sharing state, which lets per-trial
// work run in any order or thread without changing results.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace subsketch {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::string_view label = {})
      : key_(detail::mix64(seed + detail::kGolden) ^ detail::fnv1a(label)) {}

  // Child stream; independent of the parent's counter position.
  RngStream derive(std::uint64_t index) const {
    RngStream child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(index + 0x6a09e667f3bcc909ull));
    child.counter_ = 0;
    return child;
  }

  RngStream derive(std::string_view label) const {
    RngStream child(0);
    child.key_ = detail::mix64(key_ ^ detail::fnv1a(label));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() {
    return detail::mix64(key_ + detail::kGolden * ++counter_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1); safe as a log/tan argument.
  double next_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only so each value costs exactly two draws.
  double next_normal() {
    double u1 = next_open();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double next_cauchy() {
    return std::tan(std::numbers::pi * (next_open() - 0.5));
  }

  // Standard symmetric p-stable draw by the Chambers-Mallows-Stuck method,
  // 0 < p <= 2. p = 1 reduces to the Cauchy case.
  double next_stable(double p) {
    double theta = std::numbers::pi * (next_open() - 0.5);
    if (p == 1.0) return std::tan(theta);
    double w = -std::log(next_open());
    return std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p) *
           std::pow(std::cos((1.0 - p) * theta) / w, (1.0 - p) / p);
  }

  bool next_bernoulli(double q) { return next_double() < q; }

  int next_sign() { return (next_u64() >> 63) ? -1 : 1; }

  // Uniform integer in [0, n); Lemire multiply-shift.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace subsketch
