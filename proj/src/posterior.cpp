#include "blindinv/posterior.hpp"

#include <cmath>
#include <ostream>

#include "blindinv/error.hpp"
#include "blindinv/operators.hpp"

namespace blindinv {

void ChainConfig::validate() const {
  if (burn_in < 0) throw Error(ErrorCode::ConfigError, "burn-in must be non-negative");
  if (n_keep < 1) throw Error(ErrorCode::ConfigError, "need at least one kept state");
  if (thin < 1) throw Error(ErrorCode::ConfigError, "thinning must be positive");
  if (proposal_sd && !(*proposal_sd > 0.0)) throw Error(ErrorCode::ConfigError, "proposal sd must be positive");
}

std::vector<Gaussian> conditional_f_given_theta(const Observation& obs, const ThetaParam& theta,
                                                const PriorConfig& prior) {
  if (obs.y.level() < prior.level) throw Error(ErrorCode::LevelMismatch, "observation below prior level");
  const BasisSpec& basis = obs.model.basis;
  const double eps2 = obs.effective_eps() * obs.effective_eps();
  const auto n = basis.dim(prior.level);
  std::vector<Gaussian> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = singular_value(obs.model, theta, i);
    if (rho == 0.0) {
      throw Error(ErrorCode::SingularOperator, "zero singular value at level " + std::to_string(basis.level_of(i)));
    }
    const double tau2 = prior.tau_sq_at(basis.level_of(i));
    // Same Gaussian as (eps^-2 rho^-1 Y, rho^-2) / (eps^-2 + rho^-2 tau^-2), scaled
    // to stay finite for rho -> 0 and eps -> 0.
    const double denom = rho * rho * tau2 + eps2;
    out[i] = {rho * tau2 * obs.y[i] / denom, tau2 * eps2 / denom};
  }
  return out;
}

std::vector<Gaussian> theta_conditional_gaussian(const Observation& obs, const CoefficientVector& f, int level,
                                                 const PriorConfig& prior) {
  if (obs.model.kind != OperatorKind::SvdDiagonal) {
    throw Error(ErrorCode::ModelMismatch, "theta is not linear in K_theta f for this model");
  }
  if (f.level() > level || level > obs.y.level()) throw Error(ErrorCode::LevelMismatch, "need f.level <= j <= y.level");
  const BasisSpec& basis = obs.model.basis;
  const auto slots = basis.level_count(level);
  if (obs.t.size() < slots) throw Error(ErrorCode::LevelMismatch, "T does not cover level j");

  std::vector<double> ff(slots, 0.0), fy(slots, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto s = static_cast<std::size_t>(f.level_of(i) - basis.first_level());
    ff[s] += f[i] * f[i];
    fy[s] += f[i] * obs.y[i];
  }
  const double eps = obs.effective_eps();
  const double delta = obs.effective_delta();
  std::vector<Gaussian> out(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    const double t = obs.t.values()[s];
    if (delta == 0.0) {
      out[s] = {t, 0.0};
    } else if (eps == 0.0 && ff[s] > 0.0) {
      out[s] = {fy[s] / ff[s], 0.0};
    } else {
      const double precision = (eps == 0.0 ? 0.0 : ff[s] / (eps * eps)) + 1.0 / (delta * delta) +
                               1.0 / prior.sigma_theta_sq;
      const double var = 1.0 / precision;
      const double lin = (eps == 0.0 ? 0.0 : fy[s] / (eps * eps)) + t / (delta * delta);
      out[s] = {var * lin, var};
    }
  }
  return out;
}

double mh_accept_probability(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta,
                             const ThetaParam& proposal, int level, const PriorConfig& prior) {
  const double dlog = log_likelihood_projected(obs, f, proposal, level) - log_likelihood_projected(obs, f, theta, level) +
                      log_prior_theta(proposal, prior) - log_prior_theta(theta, prior);
  if (std::isnan(dlog)) return 0.0;
  return dlog >= 0.0 ? 1.0 : std::exp(dlog);
}

MhStepResult mh_theta_step(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta, int level,
                           const PriorConfig& prior, double proposal_sd, Rng& rng) {
  MhStepResult res{theta, 0, 0};
  // A noiseless T pins theta.
  if (obs.effective_delta() == 0.0) return res;
  const std::size_t coords = theta.is_scalar() ? 1 : obs.model.basis.level_count(level);
  for (std::size_t s = 0; s < coords; ++s) {
    ThetaParam proposal = res.theta;
    proposal.values()[s] += proposal_sd * rng.normal();
    const double alpha = mh_accept_probability(obs, f, res.theta, proposal, level, prior);
    ++res.proposed;
    if (rng.uniform() < alpha) {
      res.theta = std::move(proposal);
      ++res.accepted;
    }
  }
  return res;
}

namespace {

bool all_finite(const CoefficientVector& f, const ThetaParam& theta) {
  for (double v : f.coeffs()) {
    if (!std::isfinite(v)) return false;
  }
  for (double v : theta.values()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void write_trace_header(std::ostream& os, const ThetaParam& theta, const BasisSpec& basis) {
  os << "iter";
  if (theta.is_scalar()) {
    os << ",theta";
  } else {
    for (std::size_t s = 0; s < theta.size(); ++s) os << ",theta_" << basis.first_level() + static_cast<int>(s);
  }
  os << ",acc_flag\n";
}

}  // namespace

PosteriorSummary gibbs_run(const Observation& obs, const PriorConfig& prior, const ChainConfig& chain,
                           ThetaUpdate update, std::ostream* trace) {
  chain.validate();
  prior.validate();
  if (obs.y.level() < prior.level) throw Error(ErrorCode::LevelMismatch, "observation below prior level");
  if (update == ThetaUpdate::ExactGaussian && obs.model.kind != OperatorKind::SvdDiagonal) {
    throw Error(ErrorCode::ModelMismatch, "exact Gaussian theta update needs an SVD-diagonal model");
  }

  const BasisSpec& basis = obs.model.basis;
  const int level = prior.level;
  const auto dim = basis.dim(level);
  Rng rng(chain.seed);

  ThetaParam theta = project_theta(obs.t, basis, level);
  double step = chain.proposal_sd.value_or(2.0 * obs.delta);
  CoefficientVector f(basis, level);

  PosteriorSummary sum;
  std::vector<double> mean_acc(dim, 0.0), mean_sq_acc(dim, 0.0), var_acc(dim, 0.0), draw_acc(dim, 0.0);
  std::vector<double> theta_acc(theta.size(), 0.0);
  std::size_t accepted = 0, proposed = 0;

  if (trace) write_trace_header(*trace, theta, basis);

  const long total = chain.total_iterations();
  for (long it = 1; it <= total; ++it) {
    const auto cond = conditional_f_given_theta(obs, theta, prior);
    for (std::size_t i = 0; i < dim; ++i) f[i] = cond[i].mean + std::sqrt(cond[i].var) * rng.normal();

    bool moved = true;
    if (update == ThetaUpdate::ExactGaussian) {
      const auto tc = theta_conditional_gaussian(obs, f, level, prior);
      for (std::size_t s = 0; s < tc.size(); ++s) theta.values()[s] = tc[s].mean + std::sqrt(tc[s].var) * rng.normal();
    } else {
      auto step_res = mh_theta_step(obs, f, theta, level, prior, step, rng);
      theta = std::move(step_res.theta);
      moved = step_res.accepted > 0;
      if (it <= chain.burn_in) {
        if (chain.adapt_proposal && step_res.proposed > 0) {
          const double rate = static_cast<double>(step_res.accepted) / static_cast<double>(step_res.proposed);
          step *= std::exp((rate - 0.3) / std::pow(static_cast<double>(it), 0.6));
        }
      } else {
        accepted += step_res.accepted;
        proposed += step_res.proposed;
      }
    }

    if (!all_finite(f, theta)) {
      throw Error(ErrorCode::ChainDiverged, "non-finite state at iteration " + std::to_string(it));
    }
    if (trace) {
      *trace << it;
      for (double v : theta.values()) *trace << ',' << format_double(v);
      *trace << ',' << (moved ? 1 : 0) << '\n';
    }

    if (it > chain.burn_in && (it - chain.burn_in) % chain.thin == 0) {
      const auto kept = conditional_f_given_theta(obs, theta, prior);
      for (std::size_t i = 0; i < dim; ++i) {
        mean_acc[i] += kept[i].mean;
        mean_sq_acc[i] += kept[i].mean * kept[i].mean;
        var_acc[i] += kept[i].var;
        draw_acc[i] += f[i];
      }
      for (std::size_t s = 0; s < theta.size(); ++s) theta_acc[s] += theta.values()[s];
      sum.draws_f.push_back(f);
      sum.draws_theta.push_back(theta);
    }
  }

  const double m = static_cast<double>(sum.draws_f.size());
  sum.mean_f = CoefficientVector(basis, level);
  sum.mean_f_draws = CoefficientVector(basis, level);
  sum.var_f.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double mu = mean_acc[i] / m;
    sum.mean_f[i] = mu;
    sum.mean_f_draws[i] = draw_acc[i] / m;
    sum.var_f[i] = var_acc[i] / m + std::max(0.0, mean_sq_acc[i] / m - mu * mu);
  }
  sum.mean_theta = theta;
  for (std::size_t s = 0; s < theta.size(); ++s) sum.mean_theta.values()[s] = theta_acc[s] / m;
  if (update == ThetaUpdate::MetropolisHastings && proposed > 0) {
    sum.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
  }
  sum.final_proposal_sd = step;
  return sum;
}

ThetaParam posterior_mean_theta(const PosteriorSummary& summary) { return summary.mean_theta; }

double rmse_theta(const PosteriorSummary& summary, const ThetaParam& theta0) {
  const ThetaParam& est = summary.mean_theta;
  if (est.is_scalar() != theta0.is_scalar() || theta0.size() < est.size()) {
    throw Error(ErrorCode::ShapeMismatch, "theta shapes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double d = est.values()[i] - theta0.values()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void write_summary_csv(std::ostream& os, const PosteriorSummary& summary) {
  os << "index,level,mean,mean_draws,variance\n";
  for (std::size_t i = 0; i < summary.mean_f.size(); ++i) {
    os << i << ',' << summary.mean_f.level_of(i) << ',' << format_double(summary.mean_f[i]) << ','
       << format_double(summary.mean_f_draws[i]) << ',' << format_double(summary.var_f[i]) << '\n';
  }
}

}  // namespace blindinv
