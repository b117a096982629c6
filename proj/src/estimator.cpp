#include "blindinv/estimator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

#include "blindinv/error.hpp"

namespace blindinv {

void GalerkinConfig::validate() const {
  if (!(tau > 1.0)) throw Error(ErrorCode::ConfigError, "cut-off multiplier tau must exceed 1");
  if (policy == ThetaRefPolicy::Fixed && !theta_ref) {
    throw Error(ErrorCode::ConfigError, "fixed reference policy needs theta_ref");
  }
}

namespace {

double cutoff_scale(const Observation& obs, int level, const GalerkinConfig& cfg) {
  if (cfg.policy == ThetaRefPolicy::Fixed) return sigma_schedule(obs.model, *cfg.theta_ref, level);
  if (obs.model.kind == OperatorKind::Heat) return sigma_schedule(obs.model, obs.t, level);
  return std::max(sigma_schedule(obs.model, obs.t, level), obs.delta);
}

}  // namespace

GalerkinResult galerkin_estimate(const Observation& obs, int level, const GalerkinConfig& cfg) {
  cfg.validate();
  if (level < 0 || level > obs.y.level()) {
    throw Error(ErrorCode::LevelMismatch, "level " + std::to_string(level) + " exceeds observation level " +
                                              std::to_string(obs.y.level()));
  }
  const ThetaParam t_j = project_theta(obs.t, obs.model.basis, level);
  const DiagonalMatrix k = projected_matrix(obs.model, t_j, level);

  GalerkinResult result;
  result.inverse_norm = inverse_opnorm(obs.model, t_j, level);
  result.sigma_j = cutoff_scale(obs, std::max(level, obs.model.basis.first_level()), cfg);
  result.estimate = CoefficientVector(obs.model.basis, level);
  if (!(result.inverse_norm <= cfg.tau / result.sigma_j)) {
    result.cutoff_tripped = true;
    return result;
  }
  assert(result.inverse_norm * result.sigma_j <= cfg.tau * (1.0 + 1e-12));
  for (std::size_t i = 0; i < k.rows(); ++i) result.estimate[i] = obs.y[i] / k.diagonal()[i];
  return result;
}

void LepskiConfig::validate() const {
  if (!(delta_tune > 0.0 && delta_tune <= 1.0)) throw Error(ErrorCode::ConfigError, "Lepski Delta must lie in (0, 1]");
  if (!(s0 > 0.0)) throw Error(ErrorCode::ConfigError, "s0 must be positive");
  if (!(t_ill >= 0.0)) throw Error(ErrorCode::ConfigError, "ill-posedness degree must be non-negative");
  if (dim_d < 1) throw Error(ErrorCode::ConfigError, "dimension must be positive");
  if (!(b > 1.0)) throw Error(ErrorCode::ConfigError, "grid base b must exceed 1");
}

double LepskiConfig::exponent() const {
  if (exponent_override) return *exponent_override;
  return grid == LepskiGrid::Dyadic ? t_ill + dim_d / 2.0 : 1.5;
}

int max_level(double eps, const LepskiConfig& cfg) {
  cfg.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::ConfigError, "eps must lie in (0, 1)");
  const double ratio = std::log(1.0 / eps) / ((cfg.s0 + cfg.t_ill + cfg.dim_d / 2.0) * std::log(cfg.base()));
  // Absorb rounding in log(exp(-n)) so exact integer ratios are not floored down.
  return static_cast<int>(std::floor(ratio + 1e-9));
}

std::vector<int> lepski_candidates(double eps, const LepskiConfig& cfg) {
  const int top = max_level(eps, cfg);
  if (top < 1) throw Error(ErrorCode::EmptyGrid, "J_eps = " + std::to_string(top) + " leaves no candidate levels");
  std::vector<int> out;
  if (cfg.grid == LepskiGrid::Dyadic) {
    for (int j = 1; j <= top; ++j) out.push_back(j);
  } else {
    for (int m = 0; m <= top; ++m) {
      const int j = static_cast<int>(std::lround(std::pow(cfg.b, m)));
      if (out.empty() || j > out.back()) out.push_back(j);
    }
  }
  return out;
}

double lepski_threshold(double eps, int candidate, const LepskiConfig& cfg) {
  const double l = std::log(1.0 / eps);
  const double weight = cfg.grid == LepskiGrid::Dyadic ? std::exp2(candidate * cfg.exponent())
                                                       : std::pow(static_cast<double>(candidate), cfg.exponent());
  return cfg.delta_tune * eps * l * l * weight;
}

const GalerkinResult& LepskiResult::estimate_at(int level) const {
  const auto it = std::find(candidates.begin(), candidates.end(), level);
  if (it == candidates.end()) throw Error(ErrorCode::LevelMismatch, "level is not a Lepski candidate");
  return estimates[static_cast<std::size_t>(it - candidates.begin())];
}

LepskiResult lepski_select(const Observation& obs, const LepskiConfig& cfg, const GalerkinConfig& gcfg) {
  LepskiResult res;
  res.max_level = max_level(obs.eps, cfg);
  res.candidates = lepski_candidates(obs.eps, cfg);
  if (res.candidates.back() > obs.y.level()) {
    throw Error(ErrorCode::LevelMismatch, "observation does not reach candidate level " +
                                              std::to_string(res.candidates.back()));
  }
  for (int j : res.candidates) res.estimates.push_back(galerkin_estimate(obs, j, gcfg));

  const auto n = res.candidates.size();
  std::vector<bool> ok(n, true);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = b + 1; a < n; ++a) {
      const double dist = l2_distance(res.estimates[a].estimate, res.estimates[b].estimate);
      const double thr = lepski_threshold(obs.eps, res.candidates[a], cfg);
      const bool accepted = dist <= thr;
      res.comparisons.push_back({res.candidates[a], res.candidates[b], dist, thr, accepted});
      if (!accepted) ok[b] = false;
    }
  }
  const auto first = std::find(ok.begin(), ok.end(), true);
  // The largest candidate always satisfies the vacuous condition.
  const auto idx = static_cast<std::size_t>(first - ok.begin());
  res.selected = res.candidates[idx];
  res.fallback = n > 1 && idx == n - 1;
  return res;
}

int oracle_level(const CoefficientVector& f0, double eps, const LepskiConfig& cfg, double radius) {
  const int top = max_level(eps, cfg);
  if (top < 1) throw Error(ErrorCode::EmptyGrid, "J_eps < 1");
  const double total = l2_norm(f0);
  const double l = std::log(1.0 / eps);
  for (int j = 1; j <= top; ++j) {
    const double kept = l2_norm(project(f0, j));
    const double bias = std::sqrt(std::max(0.0, total * total - kept * kept));
    const double spread = radius * l * eps * std::exp2(j * (cfg.t_ill + cfg.dim_d / 2.0));
    if (bias <= spread) return j;
  }
  return top;
}

void write_lepski_diagnostics(std::ostream& os, const LepskiResult& result) {
  os << "i,j,distance,threshold,accepted\n";
  for (const auto& c : result.comparisons) {
    os << c.i << ',' << c.j << ',' << format_double(c.distance) << ',' << format_double(c.threshold) << ','
       << (c.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace blindinv
