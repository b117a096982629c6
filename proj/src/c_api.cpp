#include "blindinv/blindinv.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"

struct bi_config {
  blindinv::ExperimentConfig cfg;
};

struct bi_report {
  blindinv::ExperimentReport report;
};

struct bi_observation {
  blindinv::Observation obs;
};

namespace {

thread_local std::string g_last_error;

bi_status to_status(blindinv::ErrorCode code) {
  using blindinv::ErrorCode;
  switch (code) {
    case ErrorCode::LevelMismatch: return BI_ERR_LEVEL_MISMATCH;
    case ErrorCode::IndexOutOfTheta: return BI_ERR_INDEX_OUT_OF_THETA;
    case ErrorCode::ModelMismatch: return BI_ERR_MODEL_MISMATCH;
    case ErrorCode::SingularOperator: return BI_ERR_SINGULAR_OPERATOR;
    case ErrorCode::ChainDiverged: return BI_ERR_CHAIN_DIVERGED;
    case ErrorCode::ShapeMismatch: return BI_ERR_SHAPE_MISMATCH;
    case ErrorCode::EmptyGrid: return BI_ERR_EMPTY_GRID;
    case ErrorCode::Unsupported: return BI_ERR_UNSUPPORTED;
    case ErrorCode::ConfigError: return BI_ERR_CONFIG;
    case ErrorCode::IoError: return BI_ERR_IO;
    case ErrorCode::ParseError: return BI_ERR_PARSE;
  }
  return BI_ERR_INTERNAL;
}

bi_status fail(bi_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn and converts every exception into a status; nothing escapes the C boundary.
template <class Fn>
bi_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return BI_OK;
  } catch (const blindinv::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BI_ERR_INTERNAL, "unknown exception");
  }
}

bi_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return BI_OK;
}

void copy_coeffs(const blindinv::CoefficientVector& v, double* out, size_t cap, size_t* n) {
  if (n) *n = v.size();
  if (out) std::copy_n(v.coeffs().begin(), std::min(cap, v.size()), out);
}

bi_status null_arg(const char* what) { return fail(BI_ERR_INVALID_ARGUMENT, std::string(what) + " is null"); }

bi_status simulate_into(const blindinv::OperatorModel& model, const blindinv::CoefficientVector& f0,
                        const blindinv::ThetaParam& theta0, double eps, double delta, int n_sim, uint64_t seed,
                        int noiseless, bi_observation** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    blindinv::Rng rng(seed);
    auto obs = blindinv::simulate(model, f0, theta0, eps, delta, n_sim, rng, {noiseless != 0});
    *out = new bi_observation{std::move(obs)};
  });
}

}  // namespace

extern "C" {

const char* bi_last_error(void) { return g_last_error.c_str(); }

const char* bi_status_name(bi_status status) {
  switch (status) {
    case BI_OK: return "ok";
    case BI_ERR_LEVEL_MISMATCH: return "level mismatch";
    case BI_ERR_INDEX_OUT_OF_THETA: return "index out of theta";
    case BI_ERR_MODEL_MISMATCH: return "model mismatch";
    case BI_ERR_SINGULAR_OPERATOR: return "singular operator";
    case BI_ERR_CHAIN_DIVERGED: return "chain diverged";
    case BI_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case BI_ERR_EMPTY_GRID: return "empty grid";
    case BI_ERR_UNSUPPORTED: return "unsupported";
    case BI_ERR_CONFIG: return "configuration error";
    case BI_ERR_IO: return "i/o error";
    case BI_ERR_PARSE: return "parse error";
    case BI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bi_version(void) { return "0.1.0"; }

bi_status bi_config_create(const char* preset, bi_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<bi_config>();
    const auto p = blindinv::parse_preset(preset ? preset : "heat");
    c->cfg = p == blindinv::Preset::Deconv62 ? blindinv::ExperimentConfig::deconv62()
                                             : blindinv::ExperimentConfig::heat61();
    c->cfg.preset = p;
    *out = c.release();
  });
}

void bi_config_destroy(bi_config* cfg) { delete cfg; }

bi_status bi_config_load_file(bi_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  if (!path) return null_arg("path");
  return guarded([&] { cfg->cfg.load_file(path); });
}

bi_status bi_config_set(bi_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] { cfg->cfg.set(key, value); });
}

bi_status bi_config_validate(const bi_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { cfg->cfg.validate(); });
}

bi_status bi_config_echo(const bi_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { copy_string(cfg->cfg.echo(), buf, cap, needed); });
}

bi_status bi_config_output_dir(const bi_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { copy_string(cfg->cfg.output_dir.string(), buf, cap, needed); });
}

bi_status bi_run(const bi_config* cfg, bi_report** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new bi_report{blindinv::run_experiment(cfg->cfg)}; });
}

void bi_report_destroy(bi_report* report) { delete report; }

size_t bi_report_cell_count(const bi_report* report) { return report ? report->report.cells.size() : 0; }

int bi_report_partial(const bi_report* report) { return report && report->report.partial ? 1 : 0; }

double bi_report_wall_seconds(const bi_report* report) { return report ? report->report.wall_seconds : 0.0; }

bi_status bi_report_cell(const bi_report* report, size_t cell, bi_cell_summary* out) {
  if (!report) return null_arg("report");
  if (!out) return null_arg("out");
  if (cell >= report->report.cells.size()) return fail(BI_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto& c = report->report.cells[cell];
  *out = {c.eps, c.delta, c.n_mc, c.rmise_post, c.rmise_galerkin, c.rmse_theta};
  g_last_error.clear();
  return BI_OK;
}

bi_status bi_report_cell_levels(const bi_report* report, size_t cell, int* levels, int* counts, size_t cap,
                                size_t* n) {
  if (!report) return null_arg("report");
  if (cell >= report->report.cells.size()) return fail(BI_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto& hist = report->report.cells[cell].level_hist;
  if (n) *n = hist.size();
  size_t i = 0;
  for (const auto& [level, count] : hist) {
    if (i >= cap) break;
    if (levels) levels[i] = level;
    if (counts) counts[i] = count;
    ++i;
  }
  g_last_error.clear();
  return BI_OK;
}

bi_status bi_report_emit(const bi_report* report, const char* dir, unsigned formats) {
  if (!report) return null_arg("report");
  if (!dir) return null_arg("dir");
  return guarded([&] { blindinv::emit_report(report->report, dir, formats); });
}

bi_status bi_replay(const bi_config* cfg, double eps, double delta, size_t rep, const char* dir,
                    bi_replication* out) {
  if (!cfg) return null_arg("cfg");
  if (!dir) return null_arg("dir");
  return guarded([&] {
    const std::filesystem::path base(dir);
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    if (ec) throw blindinv::Error(blindinv::ErrorCode::IoError, "cannot create " + base.string() + ": " + ec.message());
    std::ofstream trace(base / "trace.csv", std::ios::binary);
    if (!trace) throw blindinv::Error(blindinv::ErrorCode::IoError, "cannot write " + (base / "trace.csv").string());
    const auto d = blindinv::run_replication(cfg->cfg, eps, delta, rep, &trace);
    blindinv::write_observation(d.observation, base / "observation");
    {
      std::ofstream os(base / "galerkin.csv", std::ios::binary);
      blindinv::write_coefficients_csv(os, d.galerkin.estimate);
    }
    {
      std::ofstream os(base / "posterior.csv", std::ios::binary);
      blindinv::write_summary_csv(os, d.posterior);
    }
    if (d.lepski) {
      std::ofstream os(base / "lepski.csv", std::ios::binary);
      blindinv::write_lepski_diagnostics(os, *d.lepski);
    }
    if (out) {
      const auto& r = d.record;
      *out = {r.seed, r.level, r.err2_post, r.err2_galerkin, r.err2_theta, r.acceptance, r.cutoff_tripped ? 1 : 0};
    }
  });
}

void bi_cancel(void) { blindinv::request_cancel(); }

void bi_reset_cancel(void) { blindinv::reset_cancel(); }

bi_status bi_f0_coefficients(int level, double* out, size_t cap) {
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto f = blindinv::f0_coefficients(level);
    if (cap < f.size()) throw blindinv::Error(blindinv::ErrorCode::ShapeMismatch, "output buffer too small");
    copy_coeffs(f, out, cap, nullptr);
  });
}

bi_status bi_observation_simulate_heat(double t_time, double theta0, double eps, double delta, int n_sim,
                                       uint64_t seed, int noiseless, bi_observation** out) {
  if (n_sim < 1) return fail(BI_ERR_LEVEL_MISMATCH, "n_sim must be at least 1");
  return simulate_into(blindinv::OperatorModel::heat(t_time), blindinv::f0_coefficients(n_sim),
                       blindinv::ThetaParam::scalar(theta0), eps, delta, n_sim, seed, noiseless, out);
}

bi_status bi_observation_simulate_deconv(double bandwidth, double eps, double delta, int n_sim, uint64_t seed,
                                         int noiseless, bi_observation** out) {
  if (n_sim < 0) return fail(BI_ERR_LEVEL_MISMATCH, "n_sim must be non-negative");
  if (!(bandwidth > 0.0)) return fail(BI_ERR_CONFIG, "bandwidth must be positive");
  return simulate_into(blindinv::OperatorModel::svd_diagonal(blindinv::BasisSpec::trigonometric()),
                       blindinv::f0_trig_coefficients(n_sim),
                       blindinv::laplace_kernel_singular_values(bandwidth, n_sim), eps, delta, n_sim, seed, noiseless,
                       out);
}

bi_status bi_observation_load(const char* dir, bi_observation** out) {
  if (!dir) return null_arg("dir");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new bi_observation{blindinv::read_observation(dir)}; });
}

bi_status bi_observation_save(const bi_observation* obs, const char* dir) {
  if (!obs) return null_arg("obs");
  if (!dir) return null_arg("dir");
  return guarded([&] { blindinv::write_observation(obs->obs, dir); });
}

void bi_observation_destroy(bi_observation* obs) { delete obs; }

bi_status bi_observation_y(const bi_observation* obs, double* out, size_t cap, size_t* n) {
  if (!obs) return null_arg("obs");
  copy_coeffs(obs->obs.y, out, cap, n);
  g_last_error.clear();
  return BI_OK;
}

bi_status bi_galerkin(const bi_observation* obs, int level, double tau, double* out, size_t cap, size_t* n,
                      int* cutoff_tripped) {
  if (!obs) return null_arg("obs");
  return guarded([&] {
    blindinv::GalerkinConfig g;
    g.tau = tau;
    g.validate();
    const auto r = blindinv::galerkin_estimate(obs->obs, level, g);
    copy_coeffs(r.estimate, out, cap, n);
    if (cutoff_tripped) *cutoff_tripped = r.cutoff_tripped ? 1 : 0;
  });
}

bi_status bi_lepski(const bi_observation* obs, const bi_config* cfg, int* selected) {
  if (!obs) return null_arg("obs");
  if (!cfg) return null_arg("cfg");
  if (!selected) return null_arg("selected");
  return guarded([&] {
    if (!cfg->cfg.lepski) throw blindinv::Error(blindinv::ErrorCode::ConfigError, "lepski selection is disabled");
    *selected = blindinv::lepski_select(obs->obs, *cfg->cfg.lepski, cfg->cfg.galerkin).selected;
  });
}

}  // extern "C"
