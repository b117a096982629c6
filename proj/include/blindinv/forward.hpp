#pragma once

#include <cstdint>
#include <filesystem>

#include "blindinv/basis.hpp"
#include "blindinv/operators.hpp"
#include "blindinv/rng.hpp"

namespace blindinv {

/// Simulated data: Y_k = rho_{theta0,k} f0_k + eps Z_k and T = theta0 + delta W.
struct Observation {
  CoefficientVector y;
  ThetaParam t;
  /// Nominal noise levels (always > 0).
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  OperatorModel model;
  /// Set when the data were generated without noise (test runs). Posterior
  /// computations then treat the noise levels as zero.
  bool noiseless = false;

  double effective_eps() const { return noiseless ? 0.0 : eps; }
  double effective_delta() const { return noiseless ? 0.0 : delta; }
};

struct SimulationOptions {
  bool noiseless = false;
};

/// Draws Y (in flattened index order) and then T from rng.
Observation simulate(const OperatorModel& model, const CoefficientVector& f0, const ThetaParam& theta0, double eps,
                     double delta, int n_sim, Rng& rng, SimulationOptions options = {});

/// Exponent of the level-j projected observation density:
///   eps^-2 <P_j K_theta f, Y> - (2 eps^2)^-1 ||P_j K_theta f||^2
///   + delta^-2 <P_j theta, T> - (2 delta^2)^-1 ||P_j theta||^2.
/// Terms independent of (f, theta) are dropped.
double log_likelihood_projected(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta, int level);

/// Per-coordinate contributions of the projected exponent: entry i holds the
/// Y-term of basis index i, followed by one theta term per coordinate of P_j theta.
std::vector<double> log_likelihood_terms(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta,
                                         int level);

/// Observation files: y.csv and t.csv, each preceded by `#`-comment metadata.
void write_observation(const Observation& obs, const std::filesystem::path& dir);
Observation read_observation(const std::filesystem::path& dir);

}  // namespace blindinv
