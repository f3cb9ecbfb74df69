#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace betalog {

namespace detail {

inline double pythag(double a, double b) {
  const double aa = std::fabs(a), ab = std::fabs(b);
  if (aa > ab) {
    const double r = ab / aa;
    return aa * std::sqrt(1.0 + r * r);
  }
  if (ab == 0.0) return 0.0;
  const double r = aa / ab;
  return ab * std::sqrt(1.0 + r * r);
}

}  // namespace detail

/// Eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal, ascending. Implicit-shift QL without
/// eigenvectors, after the classic tql1 of Bowdler, Martin, Reinsch,
/// and Wilkinson.
inline std::vector<double> eigen_tridiag(std::vector<double> d,
                                         std::vector<double> e) {
  const std::size_t n = d.size();
  if (n == 0) throw std::invalid_argument("eigen_tridiag: empty diagonal");
  if (e.size() + 1 != n)
    throw std::invalid_argument("eigen_tridiag: off-diagonal must have n-1 entries");
  if (n == 1) return d;

  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      while (m + 1 < n) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
        ++m;
      }
      if (m == l) break;
      if (++iter > 50)
        throw std::runtime_error("eigen_tridiag: more than 50 QL iterations");

      // implicit shift from the 2x2 at the top of the block
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = detail::pythag(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = detail::pythag(f, g);
        e[i + 1] = r;
        if (r == 0.0) {  // deflate prematurely
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace betalog
