#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace betalog {

/// Identifies one reproducible random stream. Identical (seed, stream)
/// pairs reproduce identical draws bit-for-bit; replicas get distinct
/// streams.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// PCG64 XSL-RR. 128-bit LCG state, 64-bit output, stream selected by
/// the (odd) increment.
class Pcg64 {
 public:
  explicit Pcg64(RngSeed s) : Pcg64(s.seed, s.stream) {}
  Pcg64(std::uint64_t seed, std::uint64_t stream) {
    inc_ = (static_cast<u128>(stream) << 1u) | 1u;
    state_ = 0u;
    next_u64();
    state_ += seed;
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ = state_ * kMultiplier + inc_;
    const auto xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const auto rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal (Marsaglia polar, cached spare).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze-accept; shapes
  /// below 1 boosted through Gamma(shape+1) U^{1/shape}.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = std::max(uniform(), 0x1.0p-60);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  using u128 = unsigned __int128;
  static constexpr u128 kMultiplier =
      (static_cast<u128>(0x2360ed051fc65da4ULL) << 64) | 0x4385df649fccf645ULL;
  u128 state_ = 0;
  u128 inc_ = 1;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// One draw from the chi distribution with k degrees of freedom
/// (k > 0, not necessarily integer): sqrt of a Gamma(k/2, 2) draw.
inline double chi_sample(double k, Pcg64& rng) {
  if (!(k > 0.0)) throw std::domain_error("chi_sample: k must be positive");
  return std::sqrt(2.0 * rng.gamma(0.5 * k));
}

}  // namespace betalog
