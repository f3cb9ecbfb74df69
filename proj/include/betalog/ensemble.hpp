#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace betalog {

enum class EnsembleKind { Hermite, Circular, Laguerre, Jacobi, GeneralPotential };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Hermite: return "hermite";
    case EnsembleKind::Circular: return "circular";
    case EnsembleKind::Laguerre: return "laguerre";
    case EnsembleKind::Jacobi: return "jacobi";
    case EnsembleKind::GeneralPotential: return "general";
  }
  return "?";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "hermite") return EnsembleKind::Hermite;
  if (s == "circular") return EnsembleKind::Circular;
  if (s == "laguerre") return EnsembleKind::Laguerre;
  if (s == "jacobi") return EnsembleKind::Jacobi;
  if (s == "general") return EnsembleKind::GeneralPotential;
  throw std::invalid_argument("unknown ensemble kind: " + s);
}

/// Polynomial external field, constant term first. Confinement requires
/// even degree >= 2 with positive leading coefficient.
struct Potential {
  std::vector<double> coefficients;

  double operator()(double x) const {
    double v = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
      v = v * x + *it;
    return v;
  }

  int degree() const {
    int d = static_cast<int>(coefficients.size()) - 1;
    while (d > 0 && coefficients[static_cast<std::size_t>(d)] == 0.0) --d;
    return d;
  }

  bool is_confining() const {
    const int d = degree();
    return d >= 2 && d % 2 == 0 && coefficients[static_cast<std::size_t>(d)] > 0.0;
  }
};

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Hermite;
  double beta = 2.0;
  double alpha = 1.0;      // Laguerre
  double mu = 1.0;         // Jacobi
  double nu = 1.0;         // Jacobi
  Potential potential;     // GeneralPotential

  static EnsembleSpec hermite(double beta) { return {EnsembleKind::Hermite, beta}; }
  static EnsembleSpec circular(double beta) { return {EnsembleKind::Circular, beta}; }
  static EnsembleSpec laguerre(double beta, double alpha) {
    EnsembleSpec s{EnsembleKind::Laguerre, beta};
    s.alpha = alpha;
    return s;
  }
  static EnsembleSpec jacobi(double beta, double mu, double nu) {
    EnsembleSpec s{EnsembleKind::Jacobi, beta};
    s.mu = mu;
    s.nu = nu;
    return s;
  }
  static EnsembleSpec general(double beta, Potential v) {
    EnsembleSpec s{EnsembleKind::GeneralPotential, beta};
    s.potential = std::move(v);
    return s;
  }

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("EnsembleSpec: beta must be positive");
    if (kind == EnsembleKind::Laguerre && !(alpha > 0.0))
      throw std::invalid_argument("EnsembleSpec: Laguerre requires alpha > 0");
    if (kind == EnsembleKind::Jacobi && (!(mu > 0.0) || !(nu > 0.0)))
      throw std::invalid_argument("EnsembleSpec: Jacobi requires mu, nu > 0");
    if (kind == EnsembleKind::GeneralPotential && !potential.is_confining())
      throw std::invalid_argument(
          "EnsembleSpec: potential fails the confinement check "
          "(need even degree >= 2, positive leading coefficient)");
  }
};

enum class Domain { RealLine, Circle, HalfLine, Interval };

inline Domain domain_of(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Circular: return Domain::Circle;
    case EnsembleKind::Laguerre: return Domain::HalfLine;
    case EnsembleKind::Jacobi: return Domain::Interval;
    default: return Domain::RealLine;
  }
}

/// One sorted eigenvalue/angle sample.
struct Configuration {
  std::vector<double> values;  // strictly increasing
  Domain domain = Domain::RealLine;

  std::int64_t n() const { return static_cast<std::int64_t>(values.size()); }

  void validate() const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      if (!(values[i] < values[i + 1]))
        throw std::invalid_argument("Configuration: values must be strictly increasing");
    for (double v : values) {
      switch (domain) {
        case Domain::Circle:
          if (v < 0.0 || v >= 2.0 * M_PI)
            throw std::invalid_argument("Configuration: circle values must lie in [0, 2pi)");
          break;
        case Domain::HalfLine:
          if (!(v > 0.0))
            throw std::invalid_argument("Configuration: half-line values must be positive");
          break;
        case Domain::Interval:
          if (!(v > -1.0 && v < 1.0))
            throw std::invalid_argument("Configuration: interval values must lie in (-1, 1)");
          break;
        default:
          break;
      }
    }
  }
};

}  // namespace betalog
