// Command-line front end. Talks to the library exclusively through the C API.
#include <cmath>
#include <csignal>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blindinv/blindinv.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInterrupted = 130;

int exit_code_for(bi_status s) {
  switch (s) {
    case BI_OK: return kExitOk;
    case BI_ERR_CONFIG:
    case BI_ERR_INVALID_ARGUMENT: return kExitConfig;
    case BI_ERR_IO:
    case BI_ERR_PARSE: return kExitIo;
    default: return kExitNumerical;
  }
}

struct CliError {
  int code;
};

void check(bi_status s, const char* what) {
  if (s == BI_OK) return;
  std::fprintf(stderr, "blindinv: %s failed (%s): %s\n", what, bi_status_name(s), bi_last_error());
  throw CliError{exit_code_for(s)};
}

extern "C" void on_sigint(int) { bi_cancel(); }

struct RunOptions {
  std::string config_file;
  std::vector<std::string> settings;
  std::string eps;
  std::string delta;
  int n_mc = 0;
  long long seed = -1;
  int threads = -1;
  std::string out;
  std::string formats = "csv,svg";
  bool quiet = false;
};

void add_common(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", o.settings, "extra key=value setting (repeatable)");
  cmd->add_option("--eps", o.eps, "comma-separated observation noise levels");
  cmd->add_option("--delta", o.delta, "comma-separated operator noise levels");
  cmd->add_option("--n-mc", o.n_mc, "Monte Carlo replications per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "base seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--format", o.formats, "report formats: csv, svg or csv,svg");
  cmd->add_flag("-q,--quiet", o.quiet, "suppress the result table");
}

struct Config {
  bi_config* ptr = nullptr;
  ~Config() { bi_config_destroy(ptr); }
};

void configure(Config& cfg, const std::string& preset, const RunOptions& o) {
  check(bi_config_create(preset.c_str(), &cfg.ptr), "create config");
  if (!o.config_file.empty()) check(bi_config_load_file(cfg.ptr, o.config_file.c_str()), "load config");
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "blindinv: --set expects key=value, got '%s'\n", kv.c_str());
      throw CliError{kExitConfig};
    }
    check(bi_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "apply --set");
  }
  auto set = [&](const char* k, const std::string& v) { check(bi_config_set(cfg.ptr, k, v.c_str()), k); };
  if (!o.eps.empty()) set("eps", o.eps);
  if (!o.delta.empty()) set("delta", o.delta);
  if (o.n_mc > 0) set("n_mc", std::to_string(o.n_mc));
  if (o.seed >= 0) set("seed", std::to_string(o.seed));
  if (o.threads >= 0) set("threads", std::to_string(o.threads));
  if (!o.out.empty()) set("out", o.out);
  check(bi_config_validate(cfg.ptr), "validate config");
}

std::string output_dir(const Config& cfg) {
  size_t needed = 0;
  check(bi_config_output_dir(cfg.ptr, nullptr, 0, &needed), "output dir");
  std::string s(needed, '\0');
  check(bi_config_output_dir(cfg.ptr, s.data(), s.size(), &needed), "output dir");
  s.resize(needed - 1);
  return s;
}

unsigned parse_formats(const std::string& f) {
  unsigned mask = 0;
  std::size_t start = 0;
  while (start <= f.size()) {
    const auto end = std::min(f.find(',', start), f.size());
    const auto tok = f.substr(start, end - start);
    if (tok == "csv") mask |= BI_REPORT_CSV;
    else if (tok == "svg") mask |= BI_REPORT_SVG;
    else if (!tok.empty()) {
      std::fprintf(stderr, "blindinv: unknown format '%s'\n", tok.c_str());
      throw CliError{kExitConfig};
    }
    start = end + 1;
  }
  return mask;
}

int run_experiment(const std::string& preset, const RunOptions& o) {
  Config cfg;
  configure(cfg, preset, o);
  const unsigned formats = parse_formats(o.formats);
  const std::string dir = output_dir(cfg);

  std::signal(SIGINT, on_sigint);
  bi_report* report = nullptr;
  const bi_status s = bi_run(cfg.ptr, &report);
  std::signal(SIGINT, SIG_DFL);
  check(s, "run");

  int rc = kExitOk;
  try {
    if (!o.quiet) {
      std::printf("%-10s %-10s %6s %12s %12s %12s\n", "eps", "delta", "n_mc", "rmise_post", "rmise_galerk", "rmse_theta");
      for (size_t i = 0; i < bi_report_cell_count(report); ++i) {
        bi_cell_summary c{};
        check(bi_report_cell(report, i, &c), "read cell");
        std::printf("%-10g %-10g %6d %12.6g %12.6g %12.6g\n", c.eps, c.delta, c.n_mc, c.rmise_post, c.rmise_galerkin,
                    c.rmse_theta);
      }
      std::printf("wall time %.2f s, output in %s\n", bi_report_wall_seconds(report), dir.c_str());
    }
    check(bi_report_emit(report, dir.c_str(), formats), "write report");
    if (bi_report_partial(report)) {
      std::fprintf(stderr, "blindinv: interrupted, partial report written to %s\n", dir.c_str());
      rc = kExitInterrupted;
    }
  } catch (...) {
    bi_report_destroy(report);
    throw;
  }
  bi_report_destroy(report);
  return rc;
}

int run_replay(const RunOptions& o, const std::string& preset, double eps, double delta, std::size_t rep) {
  Config cfg;
  configure(cfg, preset, o);
  const std::string dir = o.out.empty() ? output_dir(cfg) + "/replay" : o.out;
  bi_replication r{};
  check(bi_replay(cfg.ptr, eps, delta, rep, dir.c_str(), &r), "replay");
  std::printf("replication %zu seed %llu level %d err_post %.6g err_galerkin %.6g err_theta %.6g", rep,
              static_cast<unsigned long long>(r.seed), r.level, std::sqrt(r.err2_post), std::sqrt(r.err2_galerkin),
              std::sqrt(r.err2_theta));
  if (r.acceptance >= 0.0) std::printf(" acceptance %.3f", r.acceptance);
  std::printf("%s\nfiles in %s\n", r.cutoff_tripped ? " (cutoff tripped)" : "", dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian blind inverse problems: Monte Carlo benchmarks and replication replay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bi_version());

  RunOptions heat_opts, deconv_opts, custom_opts, replay_opts;
  auto* heat = app.add_subcommand("heat", "heat equation with unknown diffusivity");
  add_common(heat, heat_opts);
  auto* deconv = app.add_subcommand("deconv", "deconvolution with unknown kernel and Lepski selection");
  add_common(deconv, deconv_opts);
  auto* custom = app.add_subcommand("custom", "experiment defined entirely by --config and --set");
  add_common(custom, custom_opts);

  auto* replay = app.add_subcommand("replay", "re-run one replication and dump its intermediate results");
  add_common(replay, replay_opts);
  std::string replay_preset = "heat";
  double replay_eps = 0.0, replay_delta = 0.0;
  std::size_t replay_rep = 0;
  replay->add_option("--preset", replay_preset, "heat, deconv or custom")->check(CLI::IsMember({"heat", "deconv", "custom"}));
  replay->add_option("--cell-eps", replay_eps, "eps of the cell")->required();
  replay->add_option("--cell-delta", replay_delta, "delta of the cell")->required();
  replay->add_option("--rep", replay_rep, "replication index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*heat) return run_experiment("heat", heat_opts);
    if (*deconv) return run_experiment("deconv", deconv_opts);
    if (*custom) return run_experiment("custom", custom_opts);
    if (*replay) return run_replay(replay_opts, replay_preset, replay_eps, replay_delta, replay_rep);
  } catch (const CliError& e) {
    return e.code;
  }
  return kExitConfig;
}
