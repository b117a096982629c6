#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "blindinv/basis.hpp"
#include "blindinv/forward.hpp"
#include "blindinv/operators.hpp"

namespace blindinv {

enum class ThetaRefPolicy {
  /// Heat: theta_ref = T. SVD-diagonal: sigma_j = max(|T_j|, delta).
  PlugInFromT,
  /// sigma_j from a fixed reference parameter.
  Fixed,
};

struct GalerkinConfig {
  /// Cut-off multiplier; must exceed Q = 1.
  double tau = 2.0;
  ThetaRefPolicy policy = ThetaRefPolicy::PlugInFromT;
  std::optional<ThetaParam> theta_ref;

  void validate() const;
};

struct GalerkinResult {
  CoefficientVector estimate;
  /// True when ||K_{T,j}^{-1}|| > tau / sigma_j and the zero estimate was returned.
  bool cutoff_tripped = false;
  double inverse_norm = 0.0;
  double sigma_j = 0.0;
};

/// Projection estimator K_{T,j}^{-1} P_j Y with the spectral cut-off.
GalerkinResult galerkin_estimate(const Observation& obs, int level, const GalerkinConfig& cfg = {});

enum class LepskiGrid {
  /// Candidates 1..J_eps with thresholds ~ 2^{i (t + d/2)}.
  Dyadic,
  /// Candidates 1, b, b^2, ..., b^{J_eps} (rounded to integers) with
  /// thresholds ~ i^E.
  Geometric,
};

struct LepskiConfig {
  LepskiGrid grid = LepskiGrid::Dyadic;
  double delta_tune = 1.0;
  double s0 = 1.0;
  double t_ill = 1.0;
  int dim_d = 1;
  double b = 2.0;
  /// Replaces t + d/2 (dyadic) or the default 3/2 (geometric) in the threshold.
  std::optional<double> exponent_override;

  void validate() const;
  double base() const { return grid == LepskiGrid::Dyadic ? 2.0 : b; }
  double exponent() const;
};

/// floor(log(1/eps) / ((s0 + t + d/2) log b)), natural logarithms.
int max_level(double eps, const LepskiConfig& cfg);

/// Candidate levels in increasing order.
std::vector<int> lepski_candidates(double eps, const LepskiConfig& cfg);

/// Delta * eps * log(1/eps)^2 * w(i), w(i) = 2^{i E} (dyadic) or i^E (geometric).
double lepski_threshold(double eps, int candidate, const LepskiConfig& cfg);

struct LepskiComparison {
  int i;
  int j;
  double distance;
  double threshold;
  bool accepted;
};

struct LepskiResult {
  int selected = 0;
  int max_level = 0;
  std::vector<int> candidates;
  /// One row per candidate pair i > j.
  std::vector<LepskiComparison> comparisons;
  /// True when no candidate below the largest satisfied the rule.
  bool fallback = false;
  std::vector<GalerkinResult> estimates;

  const GalerkinResult& estimate_at(int level) const;
};

LepskiResult lepski_select(const Observation& obs, const LepskiConfig& cfg, const GalerkinConfig& gcfg = {});

/// Oracle level min{ j <= J_eps : ||f0 - P_j f0|| <= C R log(1/eps) eps 2^{j(t + d/2)} }
/// with C = 1 and the true truncation bias of f0 on the left. Falls back to
/// J_eps when no level qualifies.
int oracle_level(const CoefficientVector& f0, double eps, const LepskiConfig& cfg, double radius);

/// CSV `i,j,distance,threshold,accepted`.
void write_lepski_diagnostics(std::ostream& os, const LepskiResult& result);

}  // namespace blindinv
