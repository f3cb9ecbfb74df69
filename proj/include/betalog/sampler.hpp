#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "betalog/ensemble.hpp"
#include "betalog/numeric.hpp"
#include "betalog/rng.hpp"
#include "betalog/statistics.hpp"
#include "betalog/tridiagonal.hpp"

namespace betalog {

/// Single-site Metropolis tuning. burn_in < 0 selects the default of
/// 200 n sweeps. Step adaptation runs during burn-in only, so detailed
/// balance holds for everything sampled afterwards.
struct McmcParams {
  std::int64_t burn_in = -1;   // sweeps; -1 -> 200 n
  std::int64_t thinning = 10;  // sweeps between retained configurations
  double step_scale = 0.0;     // 0 -> domain-sized default
  double target_acceptance = 0.44;
};

/// Exact sampler for the Hermite ensemble: symmetric tridiagonal model
/// with Gaussian diagonal and chi_{beta k} off-diagonals, eigenvalues
/// rescaled by 1/sqrt(beta n) so the weight is e^{-beta N lambda^2 / 4}.
/// The scale is pinned by E[sum lambda^2] = (n-1) + 2/beta and by KS
/// agreement with a rejection oracle at small n (see tests).
inline Configuration sample_hermite_tridiag(std::int64_t n, double beta, RngSeed seed) {
  if (n < 1) throw std::invalid_argument("sample_hermite_tridiag: n must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("sample_hermite_tridiag: beta must be positive");
  Pcg64 rng(seed);
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  const double sd = std::sqrt(2.0);
  for (auto& d : diag) d = sd * rng.normal();
  for (std::int64_t k = n - 1; k >= 1; --k)
    off[static_cast<std::size_t>(n - 1 - k)] = chi_sample(beta * static_cast<double>(k), rng);

  auto ev = eigen_tridiag(std::move(diag), std::move(off));
  const double scale = 1.0 / std::sqrt(beta * static_cast<double>(n));
  for (auto& x : ev) x *= scale;
  return Configuration{std::move(ev), Domain::RealLine};
}

/// Resumable single-site Metropolis chain for the ensemble densities.
/// Gaussian proposals, wrapped on the circle; proposals leaving the
/// half-line/interval are rejected through the zero density. Each move
/// costs O(n).
class McmcChain {
 public:
  McmcChain(EnsembleSpec spec, std::int64_t n, McmcParams params, RngSeed seed)
      : spec_(std::move(spec)),
        params_(params),
        rng_(seed),
        domain_(domain_of(spec_.kind)) {
    spec_.validate();
    if (n < 1) throw std::invalid_argument("McmcChain: n must be >= 1");
    if (params_.thinning < 1) throw std::invalid_argument("McmcChain: thinning must be >= 1");
    if (!(params_.target_acceptance > 0.0 && params_.target_acceptance < 1.0))
      throw std::invalid_argument("McmcChain: target_acceptance must lie in (0,1)");
    values_.resize(static_cast<std::size_t>(n));
    init_values();
    if (domain_ == Domain::Circle) {
      cosv_.resize(values_.size());
      sinv_.resize(values_.size());
      for (std::size_t i = 0; i < values_.size(); ++i) {
        cosv_[i] = std::cos(values_[i]);
        sinv_[i] = std::sin(values_[i]);
      }
    }
    step_ = params_.step_scale > 0.0 ? params_.step_scale : default_step();
  }

  /// burn_in sweeps with step adaptation, then freeze.
  void burn_in() {
    const std::int64_t sweeps =
        params_.burn_in >= 0 ? params_.burn_in : 200 * std::ssize(values_);
    for (std::int64_t t = 0; t < sweeps; ++t) {
      const double acc = sweep();
      step_ *= std::exp(0.2 * (acc - params_.target_acceptance));
    }
  }

  /// One systematic sweep (n proposals); returns the acceptance fraction.
  double sweep() {
    const auto n = std::ssize(values_);
    std::int64_t accepted = 0;
    for (std::ptrdiff_t k = 0; k < n; ++k)
      if (try_move(k)) ++accepted;
    return static_cast<double>(accepted) / static_cast<double>(n);
  }

  void run_sweeps(std::int64_t m) {
    for (std::int64_t t = 0; t < m; ++t) sweep();
  }

  Configuration configuration() const {
    Configuration c{values_, domain_};
    std::sort(c.values.begin(), c.values.end());
    return c;
  }

  double step_scale() const { return step_; }

 private:
  void init_values() {
    const auto n = std::ssize(values_);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double frac = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      switch (domain_) {
        case Domain::RealLine: values_[static_cast<std::size_t>(i)] = -2.0 + 4.0 * frac; break;
        case Domain::Circle: values_[static_cast<std::size_t>(i)] = 2.0 * M_PI * frac; break;
        case Domain::HalfLine: values_[static_cast<std::size_t>(i)] = 2.0 * frac; break;
        case Domain::Interval: values_[static_cast<std::size_t>(i)] = -1.0 + 2.0 * frac; break;
      }
    }
  }

  double default_step() const {
    const double n = static_cast<double>(values_.size());
    switch (domain_) {
      case Domain::Circle: return 2.0 * M_PI / n;
      case Domain::HalfLine: return 2.0 / n;
      case Domain::Interval: return 2.0 / n;
      default: return 4.0 / n;
    }
  }

  bool in_domain(double x) const {
    switch (domain_) {
      case Domain::HalfLine: return x > 0.0;
      case Domain::Interval: return x > -1.0 && x < 1.0;
      default: return true;
    }
  }

  bool try_move(std::ptrdiff_t k) {
    const double x = values_[static_cast<std::size_t>(k)];
    double y = x + step_ * rng_.normal();
    if (domain_ == Domain::Circle) {
      y = std::fmod(y, 2.0 * M_PI);
      if (y < 0.0) y += 2.0 * M_PI;
    }
    if (!in_domain(y)) return false;

    const double n = static_cast<double>(values_.size());
    double s_old, s_new, cy = 0.0, sy = 0.0;
    if (domain_ == Domain::Circle) {
      cy = std::cos(y);
      sy = std::sin(y);
      s_old = 0.5 * detail::sum_log_chord_sq(cosv_, sinv_,
                                             cosv_[static_cast<std::size_t>(k)],
                                             sinv_[static_cast<std::size_t>(k)], k);
      s_new = 0.5 * detail::sum_log_chord_sq(cosv_, sinv_, cy, sy, k);
    } else {
      s_old = detail::sum_log_abs_diff(values_, x, k);
      s_new = detail::sum_log_abs_diff(values_, y, k);
    }
    if (!std::isfinite(s_new)) return false;  // exact tie: degenerate, reject

    const double b = spec_.beta;
    const double dlogp = b * (s_new - s_old) -
                         0.5 * b * (detail::field_term(spec_, n, y) -
                                    detail::field_term(spec_, n, x));
    if (dlogp >= 0.0 || std::log(rng_.uniform()) < dlogp) {
      values_[static_cast<std::size_t>(k)] = y;
      if (domain_ == Domain::Circle) {
        cosv_[static_cast<std::size_t>(k)] = cy;
        sinv_[static_cast<std::size_t>(k)] = sy;
      }
      return true;
    }
    return false;
  }

  EnsembleSpec spec_;
  McmcParams params_;
  Pcg64 rng_;
  Domain domain_;
  std::vector<double> values_;
  std::vector<double> cosv_, sinv_;  // chord-distance cache (circle only)
  double step_ = 0.1;
};

/// One configuration after burn_in + thinning sweeps.
inline Configuration sample_mcmc(const EnsembleSpec& spec, std::int64_t n,
                                 const McmcParams& params, RngSeed seed) {
  McmcChain chain(spec, n, params, seed);
  chain.burn_in();
  chain.run_sweeps(params.thinning);
  return chain.configuration();
}

}  // namespace betalog
