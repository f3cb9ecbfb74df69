#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "betalog/ensemble.hpp"
#include "betalog/numeric.hpp"
#include "betalog/special_functions.hpp"

namespace betalog {

/// log Z_N(beta) together with its first two analytic beta-derivatives.
/// log Z is the cumulant generating function of -H/2 in beta, so the
/// derivatives are exact finite-N cumulants of the log-density.
struct PartitionEvaluation {
  std::int64_t n = 0;
  double log_z = 0.0;
  double dlog_z_dbeta = 0.0;
  double d2log_z_dbeta2 = 0.0;  // = Var(H/2) >= 0
};

struct AsymptoticCoefficients {
  double e0 = 0.0;       // leading energy constant
  double f0 = 0.0;       // coefficient of N
  double r = 0.0;        // coefficient of log N
  double c_tilde = 0.0;  // constant term
};

namespace detail {

inline void require_n(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("partition: n must be >= 1");
}

struct GammaSum {  // value and first two beta-derivatives of one Gamma factor
  KahanSum v, d1, d2;
  // adds log Gamma(a + c*beta) and derivatives w.r.t. beta
  void add(double a, double c, double beta) {
    const double x = a + c * beta;
    v.add(log_gamma(x));
    d1.add(c * digamma(x));
    d2.add(c * c * trigamma(x));
  }
};

}  // namespace detail

/// Exact Selberg-product log partition function, with term-by-term
/// analytic differentiation in beta (digamma/trigamma sums; never
/// numerical differencing).
inline PartitionEvaluation log_z_exact(const EnsembleSpec& spec, std::int64_t n) {
  spec.validate();
  detail::require_n(n);
  const double b = spec.beta;
  const double N = static_cast<double>(n);
  PartitionEvaluation out;
  out.n = n;

  switch (spec.kind) {
    case EnsembleKind::Hermite: {
      // Z = (2pi)^{N/2} (N b/2)^{-(N/2)((N-1)b/2+1)} prod_j G(1+j b/2)/G(1+b/2)
      detail::GammaSum g;
      for (std::int64_t j = 1; j <= n; ++j)
        g.add(1.0, 0.5 * static_cast<double>(j), b);
      const double e = 0.5 * N * ((N - 1.0) * 0.5 * b + 1.0);
      const double lognb2 = std::log(0.5 * N * b);
      out.log_z = 0.5 * N * kConstants.log_2pi - e * lognb2 + g.v.value() -
                  N * log_gamma(1.0 + 0.5 * b);
      const double de = 0.25 * N * (N - 1.0);
      out.dlog_z_dbeta =
          -de * lognb2 - e / b + g.d1.value() - 0.5 * N * digamma(1.0 + 0.5 * b);
      out.d2log_z_dbeta2 = -2.0 * de / b + e / (b * b) + g.d2.value() -
                           0.25 * N * trigamma(1.0 + 0.5 * b);
      return out;
    }
    case EnsembleKind::Circular: {
      // Z = (2pi)^N G(1+N b/2) / G(1+b/2)^N
      const double x = 1.0 + 0.5 * N * b;
      out.log_z = N * kConstants.log_2pi + log_gamma(x) - N * log_gamma(1.0 + 0.5 * b);
      out.dlog_z_dbeta = 0.5 * N * digamma(x) - 0.5 * N * digamma(1.0 + 0.5 * b);
      out.d2log_z_dbeta2 =
          0.25 * N * N * trigamma(x) - 0.25 * N * trigamma(1.0 + 0.5 * b);
      return out;
    }
    case EnsembleKind::Laguerre: {
      // Z = (bN)^{-N(N-1)b/2 - alpha N} prod_{j=0}^{N-1}
      //       G(1+(j+1)b/2) G(alpha+j b/2) / G(1+b/2)
      const double a = spec.alpha;
      detail::GammaSum g;
      for (std::int64_t j = 0; j < n; ++j) {
        g.add(1.0, 0.5 * static_cast<double>(j + 1), b);
        g.add(a, 0.5 * static_cast<double>(j), b);
      }
      const double e = -0.5 * N * (N - 1.0) * b - a * N;  // exponent of (bN)
      const double logbn = std::log(b * N);
      out.log_z = e * logbn + g.v.value() - N * log_gamma(1.0 + 0.5 * b);
      const double de = -0.5 * N * (N - 1.0);
      out.dlog_z_dbeta =
          de * logbn + e / b + g.d1.value() - 0.5 * N * digamma(1.0 + 0.5 * b);
      out.d2log_z_dbeta2 = 2.0 * de / b - e / (b * b) + g.d2.value() -
                           0.25 * N * trigamma(1.0 + 0.5 * b);
      return out;
    }
    case EnsembleKind::Jacobi: {
      // Z = 2^{(b/2)N(N-1)+N(mu+nu-1)} prod_{j=0}^{N-1}
      //       G(1+(j+1)b/2) G(mu+j b/2) G(nu+j b/2)
      //       / [G(1+b/2) G(mu+nu+(N+j-1)b/2)]
      const double mu = spec.mu, nu = spec.nu;
      detail::GammaSum g, gden;
      for (std::int64_t j = 0; j < n; ++j) {
        g.add(1.0, 0.5 * static_cast<double>(j + 1), b);
        g.add(mu, 0.5 * static_cast<double>(j), b);
        g.add(nu, 0.5 * static_cast<double>(j), b);
        gden.add(mu + nu, 0.5 * static_cast<double>(n + j - 1), b);
      }
      const double e = 0.5 * N * (N - 1.0);  // beta-coefficient in the 2-power
      const double log2 = std::log(2.0);
      out.log_z = (e * b + N * (mu + nu - 1.0)) * log2 + g.v.value() -
                  gden.v.value() - N * log_gamma(1.0 + 0.5 * b);
      out.dlog_z_dbeta = e * log2 + g.d1.value() - gden.d1.value() -
                         0.5 * N * digamma(1.0 + 0.5 * b);
      out.d2log_z_dbeta2 =
          g.d2.value() - gden.d2.value() - 0.25 * N * trigamma(1.0 + 0.5 * b);
      return out;
    }
    case EnsembleKind::GeneralPotential:
      throw std::invalid_argument(
          "log_z_exact: no closed form for a general potential");
  }
  throw std::logic_error("log_z_exact: unreachable");
}

/// Limit variance of Y_N: beta/2 - (beta^2/4) psi'(1 + beta/2),
/// strictly inside (0, beta/2).
inline double clt_variance(double beta) {
  detail::require_positive_finite(beta, "clt_variance");
  return 0.5 * beta - 0.25 * beta * beta * trigamma(1.0 + 0.5 * beta);
}

/// Closed-form entropy constant E_beta for the classical ensembles.
inline double entropy_constant(const EnsembleSpec& spec) {
  spec.validate();
  const double b = spec.beta;
  const double base = kConstants.log_2pi - log_gamma(1.0 + 0.5 * b) +
                      0.5 * b * digamma(1.0 + 0.5 * b) - 0.5 * b;
  switch (spec.kind) {
    case EnsembleKind::Hermite:
      return base - 0.5;
    case EnsembleKind::Circular:
      return base;
    case EnsembleKind::Laguerre:
      return base + spec.alpha * std::log(0.5 * b * b) - spec.alpha -
             b * std::log(b);
    case EnsembleKind::Jacobi:
      return base - (spec.mu + spec.nu) * std::log(2.0);
    case EnsembleKind::GeneralPotential:
      throw std::invalid_argument(
          "entropy_constant: use entropy_constant_general for a general potential");
  }
  throw std::logic_error("entropy_constant: unreachable");
}

namespace detail {

// Partial derivatives of log Z with respect to the weight-exponent
// parameters (alpha for Laguerre; mu, nu for Jacobi). Together with the
// beta-derivatives these give exact cumulants of the log-density: the
// log-weight terms carry alpha-1 (resp. mu-1, nu-1) exponents that the
// beta-scaling alone does not see.
struct LaguerreAlphaPartials {
  double d_alpha, d2_alpha, d_alpha_beta;
};

inline LaguerreAlphaPartials laguerre_alpha_partials(double b, double a,
                                                     std::int64_t n) {
  const double N = static_cast<double>(n);
  KahanSum d1, d2, db;
  for (std::int64_t j = 0; j < n; ++j) {
    const double x = a + 0.5 * b * static_cast<double>(j);
    d1.add(digamma(x));
    d2.add(trigamma(x));
    db.add(0.5 * static_cast<double>(j) * trigamma(x));
  }
  return {-N * std::log(b * N) + d1.value(), d2.value(), -N / b + db.value()};
}

struct JacobiMuNuPartials {
  double d_mu, d_nu, d2_mu, d2_nu, d_mu_nu, d_mu_beta, d_nu_beta;
};

inline JacobiMuNuPartials jacobi_munu_partials(double b, double mu, double nu,
                                               std::int64_t n) {
  const double N = static_cast<double>(n);
  JacobiMuNuPartials p{};
  KahanSum dmu, dnu, d2mu, d2nu, dmunu, dmub, dnub;
  for (std::int64_t j = 0; j < n; ++j) {
    const double cj = 0.5 * static_cast<double>(j);
    const double cy = 0.5 * static_cast<double>(n + j - 1);
    const double xm = mu + cj * b, xn = nu + cj * b, y = mu + nu + cy * b;
    const double py = trigamma(y);
    dmu.add(digamma(xm) - digamma(y));
    dnu.add(digamma(xn) - digamma(y));
    d2mu.add(trigamma(xm) - py);
    d2nu.add(trigamma(xn) - py);
    dmunu.add(-py);
    dmub.add(cj * trigamma(xm) - cy * py);
    dnub.add(cj * trigamma(xn) - cy * py);
  }
  const double nlog2 = N * std::log(2.0);
  p.d_mu = nlog2 + dmu.value();
  p.d_nu = nlog2 + dnu.value();
  p.d2_mu = d2mu.value();
  p.d2_nu = d2nu.value();
  p.d_mu_nu = dmunu.value();
  p.d_mu_beta = dmub.value();
  p.d_nu_beta = dnub.value();
  return p;
}

}  // namespace detail

/// Exact E[X_N] = E[-log P / N].
inline double expected_x_stat(const EnsembleSpec& spec, std::int64_t n) {
  const auto pe = log_z_exact(spec, n);
  const double b = spec.beta;
  double v = pe.log_z - b * pe.dlog_z_dbeta;
  if (spec.kind == EnsembleKind::Laguerre) {
    const auto p = detail::laguerre_alpha_partials(b, spec.alpha, n);
    v -= (spec.alpha - 1.0) * p.d_alpha;
  } else if (spec.kind == EnsembleKind::Jacobi) {
    const auto p = detail::jacobi_munu_partials(b, spec.mu, spec.nu, n);
    v -= (spec.mu - 1.0) * p.d_mu + (spec.nu - 1.0) * p.d_nu;
  }
  return v / static_cast<double>(n);
}

/// Exact Var(Y_N) = Var(log P)/N; tends to clt_variance(beta).
inline double exact_y_variance(const EnsembleSpec& spec, std::int64_t n) {
  const auto pe = log_z_exact(spec, n);
  const double b = spec.beta;
  double var = b * b * pe.d2log_z_dbeta2;
  if (spec.kind == EnsembleKind::Laguerre) {
    const auto p = detail::laguerre_alpha_partials(b, spec.alpha, n);
    const double am1 = spec.alpha - 1.0;
    var += am1 * am1 * p.d2_alpha + 2.0 * b * am1 * p.d_alpha_beta;
  } else if (spec.kind == EnsembleKind::Jacobi) {
    const auto p = detail::jacobi_munu_partials(b, spec.mu, spec.nu, n);
    const double m1 = spec.mu - 1.0, n1 = spec.nu - 1.0;
    var += m1 * m1 * p.d2_mu + n1 * n1 * p.d2_nu + 2.0 * m1 * n1 * p.d_mu_nu +
           2.0 * b * (m1 * p.d_mu_beta + n1 * p.d_nu_beta);
  }
  return var / static_cast<double>(n);
}

/// Exact centering E[H_N] under the ordered-pair convention, plus the
/// paper's printed closed-form C_{N,beta} for comparison (its leading
/// terms follow the unordered-pair convention; see ground_state_energy).
struct CenteringConstant {
  double exact = 0.0;          // E[H_N]
  double paper_printed = 0.0;  // printed C_{N,beta}
};

inline CenteringConstant centering_constant(const EnsembleSpec& spec, std::int64_t n) {
  const auto pe = log_z_exact(spec, n);
  const double b = spec.beta;
  const double N = static_cast<double>(n);
  CenteringConstant c;
  c.exact = -2.0 * pe.dlog_z_dbeta;
  if (spec.kind == EnsembleKind::Laguerre) {
    const auto p = detail::laguerre_alpha_partials(b, spec.alpha, n);
    c.exact -= (2.0 / b) * (spec.alpha - 1.0) * p.d_alpha;
  } else if (spec.kind == EnsembleKind::Jacobi) {
    const auto p = detail::jacobi_munu_partials(b, spec.mu, spec.nu, n);
    c.exact -= (2.0 / b) * ((spec.mu - 1.0) * p.d_mu + (spec.nu - 1.0) * p.d_nu);
  }

  const double psb = digamma(1.0 + 0.5 * b);
  const double logN = std::log(N);
  switch (spec.kind) {
    case EnsembleKind::Hermite:
      c.paper_printed = 0.375 * N * N - 0.5 * N * logN +
                        (-0.5 * std::log(0.5 * b) - 0.25 + 0.5 * psb) * N;
      break;
    case EnsembleKind::Circular:
      c.paper_printed = -0.5 * N * logN - (0.5 * std::log(0.5 * b) - 0.5 * psb) * N;
      break;
    case EnsembleKind::Laguerre:
      c.paper_printed = (0.75 + 0.5 * std::log(2.0)) * N * N - 0.5 * N * logN -
                        0.5 * (1.0 + std::log(b) - psb) * N;
      break;
    case EnsembleKind::Jacobi:
      c.paper_printed = 0.5 * std::log(2.0) * (N - 2.0) * N - 0.5 * N * logN +
                        (-0.5 * std::log(0.5 * b) + 0.5 * psb) * N;
      break;
    default:
      break;
  }
  return c;
}

/// Coefficients of the Hermite log Z expansion
///   log Z = (b/2) N^2 e0 + (b N/2) log N + N f0 + r log N + c_tilde + o(1).
inline AsymptoticCoefficients asymptotic_coefficients(double beta) {
  detail::require_positive_finite(beta, "asymptotic_coefficients");
  AsymptoticCoefficients c;
  c.e0 = -0.75;
  c.f0 = kConstants.log_2pi - log_gamma(1.0 + 0.5 * beta) +
         0.5 * beta * std::log(0.5 * beta) - 0.5 * (1.0 + 0.5 * beta);
  c.r = r_coeff(beta);
  c.c_tilde = c_tilde(beta);
  return c;
}

inline double log_z_asymptotic(const EnsembleSpec& spec, std::int64_t n) {
  spec.validate();
  if (spec.kind != EnsembleKind::Hermite)
    throw std::invalid_argument("log_z_asymptotic: Hermite only");
  if (n < 2) throw std::invalid_argument("log_z_asymptotic: n must be >= 2");
  const auto c = asymptotic_coefficients(spec.beta);
  const double N = static_cast<double>(n);
  const double logN = std::log(N);
  return 0.5 * spec.beta * N * N * c.e0 + 0.5 * spec.beta * N * logN + N * c.f0 +
         c.r * logN + c.c_tilde;
}

/// Minimum of H_N under the ordered-pair convention (twice the printed
/// unordered value). Hermite: attained at the rescaled Hermite zeros;
/// Circular: at the vertices of a regular N-gon.
inline double ground_state_energy(const EnsembleSpec& spec, std::int64_t n) {
  spec.validate();
  detail::require_n(n);
  const double N = static_cast<double>(n);
  switch (spec.kind) {
    case EnsembleKind::Hermite: {
      KahanSum jlogj;
      for (std::int64_t j = 2; j <= n; ++j)
        jlogj.add(static_cast<double>(j) * std::log(static_cast<double>(j)));
      return 0.5 * N * (N - 1.0) * (std::log(N) + 1.0) - jlogj.value();
    }
    case EnsembleKind::Circular:
      return -N * std::log(N);
    default:
      throw std::invalid_argument(
          "ground_state_energy: closed form only for Hermite and Circular");
  }
}

}  // namespace betalog
