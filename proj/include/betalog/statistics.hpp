#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "betalog/ensemble.hpp"
#include "betalog/numeric.hpp"

namespace betalog {

namespace detail {

/// Per-particle external-field term of H_N, i.e. the contribution of
/// one particle at x to N sum_i V_eff(lambda_i). The folding per
/// ensemble is fixed by the exact identity
///   log P = -(beta/2) H - log Z
/// against the printed densities; for Laguerre/Jacobi the log-weight
/// exponents enter with a 2/beta factor.
inline double field_term(const EnsembleSpec& spec, double n, double x) {
  switch (spec.kind) {
    case EnsembleKind::Hermite:
      return n * 0.5 * x * x;
    case EnsembleKind::Circular:
      return 0.0;
    case EnsembleKind::Laguerre:
      if (!(x > 0.0))
        throw std::domain_error("potential_energy: Laguerre values must be positive");
      return 2.0 * n * x - (2.0 * (spec.alpha - 1.0) / spec.beta) * std::log(x);
    case EnsembleKind::Jacobi:
      if (!(x > -1.0 && x < 1.0))
        throw std::domain_error("potential_energy: Jacobi values must lie in (-1,1)");
      return -(2.0 / spec.beta) * ((spec.mu - 1.0) * std::log(1.0 - x) +
                                   (spec.nu - 1.0) * std::log(1.0 + x));
    case EnsembleKind::GeneralPotential:
      return n * spec.potential(x);
  }
  throw std::logic_error("field_term: unreachable");
}

}  // namespace detail

/// Potential energy H_N = N sum_i V(lambda_i) - sum_{i != j} ln|lambda_i
/// - lambda_j| (ordered pairs, each unordered pair twice). O(n^2) with
/// compensated accumulation. Permutation invariant; input need not be
/// sorted.
inline double potential_energy(std::span<const double> values, const EnsembleSpec& spec) {
  spec.validate();
  const auto n = std::ssize(values);
  if (n < 1) throw std::invalid_argument("potential_energy: empty configuration");
  KahanSum h;
  if (spec.kind == EnsembleKind::Circular) {
    std::vector<double> cosv(values.size()), sinv(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      cosv[j] = std::cos(values[j]);
      sinv[j] = std::sin(values[j]);
    }
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double s = 0.5 * detail::sum_log_chord_sq(
                                 cosv, sinv, cosv[static_cast<std::size_t>(i)],
                                 sinv[static_cast<std::size_t>(i)], i);
      if (!std::isfinite(s))
        throw std::domain_error("potential_energy: coincident points (log 0)");
      h.add(-s);
    }
    return h.value();
  }
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double x = values[static_cast<std::size_t>(i)];
    h.add(detail::field_term(spec, static_cast<double>(n), x));
    const double s = detail::sum_log_abs_diff(values, x, i);
    if (!std::isfinite(s))
      throw std::domain_error("potential_energy: coincident points (log 0)");
    h.add(-s);
  }
  return h.value();
}

inline double potential_energy(const Configuration& config, const EnsembleSpec& spec) {
  return potential_energy(std::span<const double>(config.values), spec);
}

/// H_N, the log-density, and the normalized statistics X_N, Y_N, W_N.
struct StatValues {
  double h = 0.0;       // potential energy
  double log_p = 0.0;   // = -(beta/2) h - log_z, exactly
  double x_stat = 0.0;  // -log_p / n
  double y_stat = 0.0;  // (log_p + n e_beta) / sqrt(n)
  double w_stat = 0.0;  // (h - centering) / sqrt(n)
};

inline StatValues statistics(const Configuration& config, const EnsembleSpec& spec,
                             double log_z, double e_beta, double centering) {
  StatValues s;
  s.h = potential_energy(config, spec);
  const double n = static_cast<double>(config.n());
  s.log_p = -0.5 * spec.beta * s.h - log_z;
  s.x_stat = -s.log_p / n;
  s.y_stat = (s.log_p + n * e_beta) / std::sqrt(n);
  s.w_stat = (s.h - centering) / std::sqrt(n);
  return s;
}

}  // namespace betalog
