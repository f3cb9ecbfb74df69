#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace betalog {

/// Compensated (Kahan) accumulator. The O(N^2) interaction sums cancel
/// to O(sqrt(N)) fluctuations, so naive summation error becomes visible
/// around N ~ 1e3.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// Log-product kernels. Four independent running products overlap the
// multiply latency chains; lanes are folded into the log between blocks
// of 32 terms whenever one leaves [1e-60, 1e60]. Within one block a
// lane moves by at most ~1e128, so products stay representable; an
// exact zero marks a coincident pair and yields -inf.
struct ProductLanes {
  double l0 = 1.0, l1 = 1.0, l2 = 1.0, l3 = 1.0;
  double log_sum = 0.0;
  bool dead = false;

  void fold_if_needed() {
    const double a0 = std::fabs(l0), a1 = std::fabs(l1);
    const double a2 = std::fabs(l2), a3 = std::fabs(l3);
    const double lo = std::min(std::min(a0, a1), std::min(a2, a3));
    const double hi = std::max(std::max(a0, a1), std::max(a2, a3));
    if (lo == 0.0) {
      dead = true;
      return;
    }
    if (lo < 1e-60 || hi > 1e60) {
      log_sum += std::log(a0 * a1) + std::log(a2 * a3);
      l0 = l1 = l2 = l3 = 1.0;
    }
  }

  double finish() {
    if (dead) return -std::numeric_limits<double>::infinity();
    const double p = std::fabs(l0 * l1) * std::fabs(l2 * l3);
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    return log_sum + std::log(p);
  }
};

inline void accumulate_abs_diff(ProductLanes& acc, std::span<const double> v, double x,
                                std::size_t lo, std::size_t hi) {
  std::size_t j = lo;
  while (j < hi && !acc.dead) {
    const std::size_t end = std::min(hi, j + 32);
    const std::size_t e4 = j + ((end - j) & ~std::size_t(3));
    for (; j < e4; j += 4) {
      acc.l0 *= v[j] - x;
      acc.l1 *= v[j + 1] - x;
      acc.l2 *= v[j + 2] - x;
      acc.l3 *= v[j + 3] - x;
    }
    for (; j < end; ++j) acc.l0 *= v[j] - x;
    acc.fold_if_needed();
  }
}

/// sum over j != skip of log|values[j] - x|; -inf on an exact tie.
/// skip < 0 includes every index.
inline double sum_log_abs_diff(std::span<const double> values, double x,
                               std::ptrdiff_t skip) {
  ProductLanes acc;
  const std::size_t s =
      skip < 0 ? values.size() : std::min<std::size_t>(std::size_t(skip), values.size());
  accumulate_abs_diff(acc, values, x, 0, s);
  if (s < values.size()) accumulate_abs_diff(acc, values, x, s + 1, values.size());
  return acc.finish();
}

inline void accumulate_chord_sq(ProductLanes& acc, std::span<const double> cosv,
                                std::span<const double> sinv, double cx, double sx,
                                std::size_t lo, std::size_t hi) {
  std::size_t j = lo;
  while (j < hi && !acc.dead) {
    const std::size_t end = std::min(hi, j + 32);
    const std::size_t e4 = j + ((end - j) & ~std::size_t(3));
    for (; j < e4; j += 4) {
      const double a0 = cosv[j] - cx, b0 = sinv[j] - sx;
      const double a1 = cosv[j + 1] - cx, b1 = sinv[j + 1] - sx;
      const double a2 = cosv[j + 2] - cx, b2 = sinv[j + 2] - sx;
      const double a3 = cosv[j + 3] - cx, b3 = sinv[j + 3] - sx;
      acc.l0 *= a0 * a0 + b0 * b0;
      acc.l1 *= a1 * a1 + b1 * b1;
      acc.l2 *= a2 * a2 + b2 * b2;
      acc.l3 *= a3 * a3 + b3 * b3;
    }
    for (; j < end; ++j) {
      const double a = cosv[j] - cx, b = sinv[j] - sx;
      acc.l0 *= a * a + b * b;
    }
    acc.fold_if_needed();
  }
}

/// sum over j != skip of log of the squared chordal distance
///   (cos[j] - cx)^2 + (sin[j] - sx)^2 = |e^{i theta_j} - e^{i x}|^2.
/// Half of this is sum log(2 |sin((theta_j - x)/2)|).
inline double sum_log_chord_sq(std::span<const double> cosv, std::span<const double> sinv,
                               double cx, double sx, std::ptrdiff_t skip) {
  ProductLanes acc;
  const std::size_t s =
      skip < 0 ? cosv.size() : std::min<std::size_t>(std::size_t(skip), cosv.size());
  accumulate_chord_sq(acc, cosv, sinv, cx, sx, 0, s);
  if (s < cosv.size()) accumulate_chord_sq(acc, cosv, sinv, cx, sx, s + 1, cosv.size());
  return acc.finish();
}

}  // namespace detail
}  // namespace betalog
