#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"

namespace blindinv {

namespace {

std::atomic<bool> g_cancel{false};

/// Pairwise summation keeps aggregates independent of accumulation order.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double root_mean(const std::vector<ReplicationRecord>& recs, double ReplicationRecord::*field) {
  std::vector<double> v;
  v.reserve(recs.size());
  for (const auto& r : recs) v.push_back(r.*field);
  return std::sqrt(pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()));
}

struct CellPlan {
  OperatorModel model;
  CoefficientVector truth;
  ThetaParam theta0;
  int n_sim = 0;
  ThetaUpdate update = ThetaUpdate::MetropolisHastings;
};

int heat_level_rule(double eps) { return std::max(1, static_cast<int>(std::lround(std::sqrt(-std::log(eps))))); }

CellPlan plan_cell(const ExperimentConfig& cfg, double eps) {
  CellPlan plan;
  const bool heat = cfg.pipeline() == ModelChoice::Heat;
  plan.model = heat ? OperatorModel::heat(cfg.heat_time) : OperatorModel::svd_diagonal(BasisSpec::trigonometric());

  int top = 0;
  if (cfg.prior_level) {
    top = *cfg.prior_level;
  } else if (cfg.lepski) {
    top = lepski_candidates(eps, *cfg.lepski).back();
  } else {
    top = heat_level_rule(eps);
  }
  // White noise is truncated at four times the dimension of the largest level in use.
  plan.n_sim = std::max(1, 4 * static_cast<int>(plan.model.basis.dim(top)));
  plan.truth = heat ? f0_coefficients(plan.n_sim) : f0_trig_coefficients(plan.n_sim);
  plan.theta0 = heat ? ThetaParam::scalar(cfg.theta0) : laplace_kernel_singular_values(cfg.kernel_bandwidth, plan.n_sim);
  plan.update = heat ? ThetaUpdate::MetropolisHastings : ThetaUpdate::ExactGaussian;
  return plan;
}

ReplicationDetail run_planned(const ExperimentConfig& cfg, const CellPlan& plan, double eps, double delta,
                              std::size_t rep, std::ostream* trace) {
  const std::uint64_t seed = cfg.base_seed + rep;
  Rng rng(seed);
  ReplicationDetail d{simulate(plan.model, plan.truth, plan.theta0, eps, delta, plan.n_sim, rng, {cfg.noiseless}),
                      std::nullopt,
                      {},
                      {},
                      {}};

  int level = 0;
  if (cfg.prior_level) {
    level = *cfg.prior_level;
    d.galerkin = galerkin_estimate(d.observation, level, cfg.galerkin);
  } else if (cfg.lepski) {
    d.lepski = lepski_select(d.observation, *cfg.lepski, cfg.galerkin);
    level = d.lepski->selected;
    d.galerkin = d.lepski->estimate_at(level);
  } else {
    level = heat_level_rule(eps);
    d.galerkin = galerkin_estimate(d.observation, level, cfg.galerkin);
  }

  ChainConfig chain = cfg.chain;
  chain.seed = mix_seed(seed);
  const PriorConfig prior = PriorConfig::constant(level, cfg.tau_sq, cfg.sigma_theta_sq);
  d.posterior = gibbs_run(d.observation, prior, chain, plan.update, trace);

  auto& r = d.record;
  r.replication = rep;
  r.seed = seed;
  r.level = level;
  r.err2_post = f0_error_squared(d.posterior.mean_f);
  r.err2_galerkin = f0_error_squared(d.galerkin.estimate);
  const double e = rmse_theta(d.posterior, plan.theta0);
  r.err2_theta = e * e;
  r.acceptance = d.posterior.acceptance_rate.value_or(-1.0);
  r.cutoff_tripped = d.galerkin.cutoff_tripped;
  return d;
}

CellResult run_cell(const ExperimentConfig& cfg, double eps, double delta, bool& interrupted) {
  const CellPlan plan = plan_cell(cfg, eps);
  const auto n = static_cast<std::size_t>(cfg.n_mc);
  std::vector<ReplicationRecord> records(n);
  std::vector<char> done(n, 0);
  std::optional<CellExample> example;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      if (g_cancel.load()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const std::size_t rep = next.fetch_add(1);
      if (rep >= n) return;
      try {
        auto d = run_planned(cfg, plan, eps, delta, rep, nullptr);
        records[rep] = d.record;
        done[rep] = 1;
        if (rep == 0) {
          CellExample ex{plan.truth, d.galerkin.estimate, d.posterior.mean_f, {}};
          const auto n_draws = std::min<std::size_t>(20, d.posterior.draws_f.size());
          ex.draws.assign(d.posterior.draws_f.begin(), d.posterior.draws_f.begin() + static_cast<std::ptrdiff_t>(n_draws));
          example = std::move(ex);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1u, static_cast<unsigned>(n));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  CellResult cell;
  cell.eps = eps;
  cell.delta = delta;
  for (std::size_t i = 0; i < n; ++i) {
    if (done[i]) cell.records.push_back(records[i]);
  }
  if (cell.records.size() < n) interrupted = true;
  cell.n_mc = static_cast<int>(cell.records.size());
  cell.example = std::move(example);
  if (cell.records.empty()) return cell;
  cell.rmise_post = root_mean(cell.records, &ReplicationRecord::err2_post);
  cell.rmise_galerkin = root_mean(cell.records, &ReplicationRecord::err2_galerkin);
  cell.rmse_theta = root_mean(cell.records, &ReplicationRecord::err2_theta);
  for (const auto& r : cell.records) ++cell.level_hist[r.level];
  return cell;
}

ExperimentReport run_all(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  for (const auto& [eps, delta] : experiment_cells(cfg)) {
    if (g_cancel.load()) {
      report.partial = true;
      break;
    }
    bool interrupted = false;
    report.cells.push_back(run_cell(cfg, eps, delta, interrupted));
    if (interrupted) report.partial = true;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

void request_cancel() { g_cancel.store(true); }
void reset_cancel() { g_cancel.store(false); }

std::vector<std::pair<double, double>> experiment_cells(const ExperimentConfig& cfg) {
  std::vector<std::pair<double, double>> cells;
  if (cfg.paired) {
    for (std::size_t i = 0; i < cfg.eps_grid.size() && i < cfg.delta_grid.size(); ++i) {
      cells.emplace_back(cfg.eps_grid[i], cfg.delta_grid[i]);
    }
  } else {
    for (double eps : cfg.eps_grid) {
      for (double delta : cfg.delta_grid) cells.emplace_back(eps, delta);
    }
  }
  return cells;
}

ReplicationDetail run_replication(const ExperimentConfig& cfg, double eps, double delta, std::size_t rep,
                                  std::ostream* trace) {
  cfg.validate();
  return run_planned(cfg, plan_cell(cfg, eps), eps, delta, rep, trace);
}

ExperimentReport run_heat(const ExperimentConfig& cfg) {
  if (cfg.pipeline() != ModelChoice::Heat) throw Error(ErrorCode::ConfigError, "configuration is not a heat run");
  return run_all(cfg);
}

ExperimentReport run_deconvolution(const ExperimentConfig& cfg) {
  if (cfg.pipeline() != ModelChoice::Deconvolution) {
    throw Error(ErrorCode::ConfigError, "configuration is not a deconvolution run");
  }
  return run_all(cfg);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) { return run_all(cfg); }

}  // namespace blindinv
