#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "betalog/ensemble.hpp"
#include "betalog/partition.hpp"

namespace betalog {

/// Discretized equilibrium measure on a uniform grid: quadrature masses
/// on the probability simplex, the density they induce, detected
/// support intervals, and the Euler-Lagrange certificate.
struct EquilibriumMeasure {
  std::vector<double> grid;
  std::vector<double> weights;  // nonnegative, sum 1
  std::vector<double> density;  // weights / cell width
  std::vector<std::pair<double, double>> support;
  double lagrange_l = 0.0;
  double el_residual = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;

  double cell_width(std::size_t i) const {
    const double h = grid[1] - grid[0];
    return (i == 0 || i + 1 == grid.size()) ? 0.5 * h : h;
  }
};

namespace detail {

inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& z : a) z /= static_cast<double>(n);
}

/// Toeplitz log-kernel matvec via circulant embedding. The diagonal is
/// the uniform-cell self energy log(h) - 3/2, which regularizes the
/// log singularity; a zero diagonal would make a single-cell point mass
/// the discrete maximizer.
class LogKernel {
 public:
  LogKernel(std::size_t g, double h) : g_(g) {
    std::size_t L = 1;
    while (L < 2 * g) L <<= 1;
    std::vector<std::complex<double>> c(L, 0.0);
    c[0] = std::log(h) - 1.5;
    for (std::size_t m = 1; m < g; ++m) {
      const double km = std::log(h * static_cast<double>(m));
      c[m] = km;
      c[L - m] = km;
    }
    fft(c, false);
    kernel_hat_ = std::move(c);
  }

  std::vector<double> apply(const std::vector<double>& w) const {
    const std::size_t L = kernel_hat_.size();
    std::vector<std::complex<double>> x(L, 0.0);
    for (std::size_t i = 0; i < g_; ++i) x[i] = w[i];
    fft(x, false);
    for (std::size_t i = 0; i < L; ++i) x[i] *= kernel_hat_[i];
    fft(x, true);
    std::vector<double> out(g_);
    for (std::size_t i = 0; i < g_; ++i) out[i] = x[i].real();
    return out;
  }

 private:
  std::size_t g_;
  std::vector<std::complex<double>> kernel_hat_;
};

/// Euclidean projection onto the probability simplex.
inline void project_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  std::size_t rho = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    running += u[i];
    if (u[i] * static_cast<double>(i + 1) > running - 1.0) {
      rho = i;
      css = running;
    }
  }
  theta = (css - 1.0) / static_cast<double>(rho + 1);
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

struct SupportMask {
  std::vector<bool> on;
  std::vector<std::pair<std::size_t, std::size_t>> runs;  // inclusive index ranges
};

/// Support = density above a machine-scale fraction of its peak, with
/// single-cell gaps merged away.
inline SupportMask detect_support(const std::vector<double>& density) {
  const double peak = *std::max_element(density.begin(), density.end());
  const double thr = 1e-6 * peak;
  std::vector<bool> on(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) on[i] = density[i] > thr;
  for (std::size_t i = 1; i + 1 < on.size(); ++i)
    if (!on[i] && on[i - 1] && on[i + 1]) on[i] = true;
  SupportMask m;
  m.on = on;
  for (std::size_t i = 0; i < on.size();) {
    if (!on[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < on.size() && on[j + 1]) ++j;
    m.runs.emplace_back(i, j);
    i = j + 1;
  }
  return m;
}

struct ElResult {
  double l = 0.0;
  double residual = 0.0;
};

inline ElResult el_conditions(const std::vector<double>& u, const SupportMask& sup) {
  ElResult r;
  double sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (sup.on[i]) {
      sum += u[i];
      ++cnt;
    }
  r.l = sum / static_cast<double>(cnt);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (sup.on[i])
      worst = std::max(worst, std::fabs(u[i] - r.l));
    else
      worst = std::max(worst, u[i] - r.l);  // one-sided off support
  }
  r.residual = worst;
  return r;
}

inline void require_uniform_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("measure grid too small");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::fabs(grid[i] - grid[i - 1] - h) > 1e-9 * std::fabs(h))
      throw std::invalid_argument("measure grid must be uniform");
}

}  // namespace detail

/// Builds an EquilibriumMeasure from density values on a uniform grid
/// (trapezoid masses, normalized). Used by tests and by external
/// densities fed to el_residual / entropy_functional.
inline EquilibriumMeasure make_measure(std::vector<double> grid, std::vector<double> density) {
  detail::require_uniform_grid(grid);
  if (grid.size() != density.size())
    throw std::invalid_argument("make_measure: grid/density size mismatch");
  EquilibriumMeasure m;
  m.grid = std::move(grid);
  m.density = std::move(density);
  const std::size_t g = m.grid.size();
  m.weights.resize(g);
  double total = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    if (m.density[i] < 0.0) throw std::invalid_argument("make_measure: negative density");
    m.weights[i] = m.density[i] * m.cell_width(i);
    total += m.weights[i];
  }
  for (std::size_t i = 0; i < g; ++i) {
    m.weights[i] /= total;
    m.density[i] = m.weights[i] / m.cell_width(i);
  }
  const auto sup = detail::detect_support(m.density);
  for (const auto& [a, b] : sup.runs) m.support.emplace_back(m.grid[a], m.grid[b]);
  return m;
}

/// Max violation of the Euler-Lagrange conditions for the measure under
/// the potential, with l estimated as the support average of
/// 2 int log|x-y| dmu(y) - V(x).
inline double el_residual(const EquilibriumMeasure& measure, const Potential& v) {
  detail::require_uniform_grid(measure.grid);
  const std::size_t g = measure.grid.size();
  const double h = measure.grid[1] - measure.grid[0];
  detail::LogKernel kernel(g, h);
  const auto kw = kernel.apply(measure.weights);
  std::vector<double> u(g);
  for (std::size_t i = 0; i < g; ++i) u[i] = 2.0 * kw[i] - v(measure.grid[i]);
  const auto sup = detail::detect_support(measure.density);
  return detail::el_conditions(u, sup).residual;
}

/// Maximizes  sum_{i != j} w_i w_j log|x_i - x_j| - sum_i w_i V(x_i)
/// over the probability simplex by projected gradient ascent with
/// Armijo backtracking. The discrete objective is concave, so the
/// stationary point found is global; el_residual certifies it.
inline EquilibriumMeasure solve_equilibrium(const Potential& v, std::int64_t grid_points,
                                            double box_halfwidth, double tol) {
  if (!v.is_confining())
    throw std::invalid_argument(
        "solve_equilibrium: potential fails the confinement check "
        "(need even degree >= 2, positive leading coefficient)");
  if (grid_points < 200)
    throw std::invalid_argument("solve_equilibrium: need at least 200 grid points");
  if (!(box_halfwidth > 0.0) || !(tol > 0.0))
    throw std::invalid_argument("solve_equilibrium: box and tol must be positive");

  const auto g = static_cast<std::size_t>(grid_points);
  const double h = 2.0 * box_halfwidth / static_cast<double>(grid_points - 1);
  std::vector<double> x(g), V(g);
  for (std::size_t i = 0; i < g; ++i) {
    x[i] = -box_halfwidth + h * static_cast<double>(i);
    V[i] = v(x[i]);
  }
  const double vmin = *std::min_element(V.begin(), V.end());
  if (v(box_halfwidth) - 2.0 * std::log(2.0 * box_halfwidth) < vmin + 0.1)
    throw std::invalid_argument(
        "solve_equilibrium: box too small for the confinement margin "
        "V(box) - 2 log(2 box) > min V + 0.1");

  detail::LogKernel kernel(g, h);

  // start from the normalized Gibbs weight of V
  std::vector<double> w(g);
  for (std::size_t i = 0; i < g; ++i) w[i] = std::exp(-(V[i] - vmin));
  const double w0 = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& wi : w) wi /= w0;

  auto objective = [&](const std::vector<double>& ww, const std::vector<double>& kww) {
    double f = 0.0;
    for (std::size_t i = 0; i < g; ++i) f += ww[i] * (kww[i] - V[i]);
    return f;
  };

  constexpr std::int64_t kMaxIterations = 50000;
  double step = 1.0;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> best_w = w;
  std::int64_t it = 0;
  bool converged = false;

  auto kw = kernel.apply(w);
  for (; it < kMaxIterations; ++it) {
    const double f = objective(w, kw);
    std::vector<double> grad(g);
    for (std::size_t i = 0; i < g; ++i) grad[i] = 2.0 * kw[i] - V[i];

    std::vector<double> w2, kw2;
    double f2 = -std::numeric_limits<double>::infinity();
    for (int bt = 0; bt < 60; ++bt) {
      w2 = w;
      for (std::size_t i = 0; i < g; ++i) w2[i] += step * grad[i];
      detail::project_simplex(w2);
      kw2 = kernel.apply(w2);
      f2 = objective(w2, kw2);
      double gd = 0.0;
      for (std::size_t i = 0; i < g; ++i) gd += grad[i] * (w2[i] - w[i]);
      if (f2 >= f + 1e-4 * gd) break;
      step *= 0.5;
    }
    w = std::move(w2);
    kw = std::move(kw2);
    step *= 1.3;

    if (it % 25 == 0 || it + 1 == kMaxIterations) {
      std::vector<double> density(g);
      for (std::size_t i = 0; i < g; ++i)
        density[i] = w[i] / ((i == 0 || i + 1 == g) ? 0.5 * h : h);
      const auto sup = detail::detect_support(density);
      std::vector<double> u(g);
      for (std::size_t i = 0; i < g; ++i) u[i] = 2.0 * kw[i] - V[i];
      const auto el = detail::el_conditions(u, sup);
      if (el.residual < best_res) {
        best_res = el.residual;
        best_w = w;
      }
      if (el.residual <= tol) {
        converged = true;
        ++it;
        break;
      }
    }
  }

  EquilibriumMeasure m;
  m.grid = std::move(x);
  m.weights = std::move(best_w);
  m.converged = converged;
  m.iterations = it;
  m.density.resize(g);
  for (std::size_t i = 0; i < g; ++i) m.density[i] = m.weights[i] / m.cell_width(i);
  const auto sup = detail::detect_support(m.density);
  for (const auto& [a, b] : sup.runs) m.support.emplace_back(m.grid[a], m.grid[b]);
  const auto kwf = kernel.apply(m.weights);
  std::vector<double> u(g);
  for (std::size_t i = 0; i < g; ++i) u[i] = 2.0 * kwf[i] - V[i];
  const auto el = detail::el_conditions(u, sup);
  m.lagrange_l = el.l;
  m.el_residual = el.residual;
  return m;
}

/// Energy functional value  E_V(mu) = int int log|x-y| dmu dmu - int V dmu
/// of a discretized measure (self-cell energies included through the
/// regularized diagonal).
inline double energy_functional(const EquilibriumMeasure& measure, const Potential& v) {
  detail::require_uniform_grid(measure.grid);
  const std::size_t g = measure.grid.size();
  detail::LogKernel kernel(g, measure.grid[1] - measure.grid[0]);
  const auto kw = kernel.apply(measure.weights);
  double f = 0.0;
  for (std::size_t i = 0; i < g; ++i)
    f += measure.weights[i] * (kw[i] - v(measure.grid[i]));
  return f;
}

/// S[rho] = int rho log rho - 1 + log 2pi over the support, with
/// square-root-weighted panels at the interval edges where rho ~ sqrt.
inline double entropy_functional(const EquilibriumMeasure& measure) {
  detail::require_uniform_grid(measure.grid);
  const double h = measure.grid[1] - measure.grid[0];
  const auto sup = detail::detect_support(measure.density);
  if (sup.runs.empty()) throw std::domain_error("entropy_functional: empty support");

  auto sqrt_panel = [&](double rho_edge) {
    // int_0^h c sqrt(t) log(c sqrt(t)) dt with c fitted from the edge
    // cell: rho_edge = c sqrt(h/2)
    const double c = rho_edge / std::sqrt(0.5 * h);
    if (c <= 0.0) return 0.0;
    const double h32 = h * std::sqrt(h);
    return c * h32 * ((2.0 / 3.0) * std::log(c) + std::log(h) / 3.0 - 2.0 / 9.0);
  };

  KahanSum s;
  for (const auto& [a, b] : sup.runs) {
    for (std::size_t i = a; i <= b; ++i) {
      const double rho = measure.density[i];
      if (rho <= 0.0) {
        if (i > a && i < b)
          throw std::domain_error(
              "entropy_functional: density vanishes strictly inside a support "
              "interval (non-generic)");
        continue;
      }
      if ((i == a || i == b) && b > a + 2)
        s.add(sqrt_panel(rho));
      else
        s.add(measure.weights[i] * std::log(rho));
    }
  }
  return s.value() - 1.0 + kConstants.log_2pi;
}

/// E_beta[V] from the entropy of the equilibrium density. raw follows
/// the printed formula E_beta^Her - S[rho^V]; normalized subtracts the
/// semicircle baseline S[rho_sc] = -1/2 so the quadratic potential
/// reproduces E_beta^Her exactly. normalized - raw = S[rho_sc].
struct GeneralEntropy {
  double raw = 0.0;
  double normalized = 0.0;
};

inline GeneralEntropy entropy_constant_general(double beta, const EquilibriumMeasure& measure) {
  constexpr double kSemicircleEntropy = -0.5;
  const double s = entropy_functional(measure);
  const double e_her = entropy_constant(EnsembleSpec::hermite(beta));
  GeneralEntropy out;
  out.raw = e_her - s;
  out.normalized = e_her - (s - kSemicircleEntropy);
  return out;
}

/// Potential coefficient file: one real per line, constant term first.
inline Potential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  Potential v;
  double c;
  while (in >> c) v.coefficients.push_back(c);
  if (v.coefficients.empty())
    throw std::runtime_error("potential file has no coefficients: " + path);
  return v;
}

inline void write_measure_csv(const EquilibriumMeasure& m, std::ostream& out) {
  out << "x,density,weight\n";
  char buf[96];
  for (std::size_t i = 0; i < m.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", m.grid[i], m.density[i],
                  m.weights[i]);
    out << buf;
  }
}

}  // namespace betalog
