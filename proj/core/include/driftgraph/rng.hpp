#pragma once

// Counter-based random number utilities.
//
// Every random quantity in a run is a pure function of (master seed, purpose
// tag, object identity, counter). Nothing here carries hidden state beyond an
// explicit stream counter, so replicas can be evaluated on any number of
// workers in any order and still produce identical results.

#include <cmath>
#include <cstdint>
#include <limits>

namespace driftgraph::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Keyed counter PRF, SplittableRandom-style.
constexpr std::uint64_t prf(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

// Key derivation: fold a word into a key. Chain to build hierarchical keys.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t word) noexcept {
  return mix64((key + kGolden) ^ (word * 0xff51afd7ed558ccdull));
}

// Compile-time FNV-1a over a string literal, used for purpose tags.
constexpr std::uint64_t tag(const char* s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 0x100000001b3ull;
  return h;
}

// Map a 64-bit word to the open interval (0,1). 52-bit resolution; the +1/2
// offset keeps both endpoints strictly out (the top value is 1 - 2^-53,
// exactly representable).
constexpr double to_unit_open(std::uint64_t x) noexcept {
  return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

// Inverse normal CDF (Acklam's rational approximation, polished with one
// Halley step through erfc). Gives a standard normal deviate from a single
// uniform; absolute error well below 1e-13 over (0,1).
inline double normal_quantile(double p) noexcept {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement.
  const double e = 0.5 * std::erfc(-x * 0x1.6a09e667f3bcdp-1) - p;  // 1/sqrt(2)
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);  // sqrt(2*pi)
  return x - u / (1.0 + 0.5 * x * u);
}

inline double normal_from_bits(std::uint64_t x) noexcept {
  return normal_quantile(to_unit_open(x));
}

// Sequential stream over the PRF. Satisfies UniformRandomBitGenerator so the
// standard <random> distributions can run on top of it.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return prf(key_, counter_++); }

  double uniform() noexcept { return to_unit_open((*this)()); }
  double normal() noexcept { return normal_from_bits((*this)()); }

  // Independent child stream; does not disturb this stream's counter.
  Stream child(std::uint64_t word) const noexcept {
    return Stream(derive(key_, word));
  }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace driftgraph::rng
