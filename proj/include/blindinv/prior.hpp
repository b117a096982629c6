#pragma once

#include <vector>

#include "blindinv/basis.hpp"
#include "blindinv/operators.hpp"

namespace blindinv {

/// Truncated Gaussian product prior: f_k ~ N(0, tau_{|k|}^2) for |k| <= J,
/// f_k = 0 above J, and independent N(0, sigma^2) coordinates for theta.
struct PriorConfig {
  int level = 4;
  /// Variances indexed by level 0..level. A single entry applies to every level.
  std::vector<double> tau_sq{1.0};
  double sigma_theta_sq = 1.0;

  static PriorConfig constant(int level, double tau_sq, double sigma_theta_sq);

  double tau_sq_at(int level) const;
  void validate() const;
};

/// Gaussian log-density of theta with the -log(2 pi sigma^2)/2 constants dropped.
double log_prior_theta(const ThetaParam& theta, const PriorConfig& prior);
double log_prior_f(const CoefficientVector& f, const PriorConfig& prior);

}  // namespace blindinv
