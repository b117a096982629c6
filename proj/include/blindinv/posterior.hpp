#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "blindinv/basis.hpp"
#include "blindinv/forward.hpp"
#include "blindinv/prior.hpp"
#include "blindinv/rng.hpp"

namespace blindinv {

struct ChainConfig {
  int burn_in = 1000;
  int n_keep = 500;
  int thin = 5;
  /// Random-walk step for theta; 2 * delta when unset.
  std::optional<double> proposal_sd;
  /// Robbins-Monro scaling of the step during burn-in, targeting acceptance 0.3.
  bool adapt_proposal = false;
  std::uint64_t seed = 1;

  void validate() const;
  long total_iterations() const { return burn_in + static_cast<long>(n_keep) * thin; }
};

struct Gaussian {
  double mean;
  double var;
};

/// Conditional law of f_k given theta, Y, T for |k| <= J (independent across k).
std::vector<Gaussian> conditional_f_given_theta(const Observation& obs, const ThetaParam& theta,
                                                const PriorConfig& prior);

/// Conditional law of the theta coordinates of levels <= level given f, for
/// SVD-diagonal models (theta enters K_theta f linearly). Coordinates sharing
/// a level pool their f_k.
std::vector<Gaussian> theta_conditional_gaussian(const Observation& obs, const CoefficientVector& f, int level,
                                                 const PriorConfig& prior);

/// min(1, exp(Delta log)) for moving from theta to proposal with f fixed.
double mh_accept_probability(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta,
                             const ThetaParam& proposal, int level, const PriorConfig& prior);

struct MhStepResult {
  ThetaParam theta;
  std::size_t accepted = 0;
  std::size_t proposed = 0;
};

/// One random-walk Metropolis sweep over the theta coordinates of levels <= level
/// (a single step for scalar theta).
MhStepResult mh_theta_step(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta, int level,
                           const PriorConfig& prior, double proposal_sd, Rng& rng);

enum class ThetaUpdate {
  MetropolisHastings,
  ExactGaussian,
};

struct PosteriorSummary {
  /// Rao-Blackwellised mean: average of the conditional means given the kept theta states.
  CoefficientVector mean_f;
  /// Plain average of the kept f draws.
  CoefficientVector mean_f_draws;
  /// Posterior variance per coefficient (mean conditional variance plus the
  /// spread of the conditional means).
  std::vector<double> var_f;
  std::vector<CoefficientVector> draws_f;
  ThetaParam mean_theta;
  std::vector<ThetaParam> draws_theta;
  /// Post-burn-in acceptance rate of the Metropolis steps.
  std::optional<double> acceptance_rate;
  double final_proposal_sd = 0.0;
};

/// Metropolis-within-Gibbs sampler for the joint posterior of (f, theta)
/// restricted to level prior.level. If `trace` is non-null, every iteration
/// is written as CSV `iter,theta...,acc_flag`.
PosteriorSummary gibbs_run(const Observation& obs, const PriorConfig& prior, const ChainConfig& chain,
                           ThetaUpdate update, std::ostream* trace = nullptr);

ThetaParam posterior_mean_theta(const PosteriorSummary& summary);
/// Euclidean distance between the posterior mean of theta and theta0
/// (theta0 truncated to the summary's coordinates).
double rmse_theta(const PosteriorSummary& summary, const ThetaParam& theta0);

/// CSV `index,level,mean,mean_draws,variance`.
void write_summary_csv(std::ostream& os, const PosteriorSummary& summary);

}  // namespace blindinv
