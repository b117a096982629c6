#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blindinv/basis.hpp"
#include "blindinv/estimator.hpp"
#include "blindinv/posterior.hpp"

namespace blindinv {

/// Sine coefficients of f0(x) = 4x(1-x)(8x-5):
/// f0_k = -8 sqrt(2) (13 + 11 (-1)^k) / (pi^3 k^3).
CoefficientVector f0_coefficients(int level);
/// Trigonometric coefficients of the same f0 extended 1-periodically:
/// 1 -> -2/3, sin_j -> -24 sqrt(2)/(pi^3 j^3), cos_j -> 2 sqrt(2)/(pi^2 j^2).
CoefficientVector f0_trig_coefficients(int level);
/// ||f0||^2 = 184/105.
double f0_norm_squared();
double f0_value(double x);

enum class Preset { Heat61, Deconv62, Custom };
enum class ModelChoice { Heat, Deconvolution };

struct ExperimentConfig {
  Preset preset = Preset::Heat61;
  /// Pipeline of a Custom run; fixed by the other presets.
  ModelChoice model = ModelChoice::Heat;
  std::vector<double> eps_grid{1e-6};
  std::vector<double> delta_grid{1e-6};
  /// Pair eps_grid[i] with delta_grid[i] instead of taking all combinations.
  bool paired = false;
  int n_mc = 500;
  std::uint64_t base_seed = 42;
  double tau_sq = 1.0;
  double sigma_theta_sq = 1.0;
  ChainConfig chain;
  /// Heat: observation time and true diffusivity.
  double heat_time = 0.1;
  double theta0 = 1.0;
  /// Deconvolution: Laplace kernel bandwidth of the truth.
  double kernel_bandwidth = 0.1;
  /// Fixed prior level; heat defaults to round(sqrt(-log eps)), deconvolution to the Lepski choice.
  std::optional<int> prior_level;
  std::optional<LepskiConfig> lepski;
  GalerkinConfig galerkin;
  /// 0 selects the hardware concurrency.
  int threads = 0;
  bool noiseless = false;
  std::filesystem::path output_dir = "out";

  static ExperimentConfig heat61();
  static ExperimentConfig deconv62();

  ModelChoice pipeline() const;
  void validate() const;
  /// Applies one `key = value` setting.
  void set(const std::string& key, const std::string& value);
  /// Flat `key = value` lines; '#' starts a comment.
  void load(std::istream& is);
  void load_file(const std::filesystem::path& path);
  /// Settings echo, one `key = value` per line, re-loadable with load().
  std::string echo() const;
};

std::string to_string(Preset p);
Preset parse_preset(const std::string& s);

struct ReplicationRecord {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  int level = 0;
  double err2_post = 0.0;
  double err2_galerkin = 0.0;
  double err2_theta = 0.0;
  double acceptance = -1.0;
  bool cutoff_tripped = false;
};

/// First replication of a cell, kept for plotting.
struct CellExample {
  CoefficientVector truth;
  CoefficientVector galerkin;
  CoefficientVector posterior_mean;
  std::vector<CoefficientVector> draws;
};

struct CellResult {
  double eps = 0.0;
  double delta = 0.0;
  int n_mc = 0;
  double rmise_post = 0.0;
  double rmise_galerkin = 0.0;
  double rmse_theta = 0.0;
  /// Selected (or fixed) level -> count.
  std::map<int, int> level_hist;
  std::vector<ReplicationRecord> records;
  std::optional<CellExample> example;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  double wall_seconds = 0.0;
  bool partial = false;
};

/// Squared L2 distance between an estimate and the full f0 (coefficient
/// space, exact tail from ||f0||^2).
double f0_error_squared(const CoefficientVector& estimate);

ExperimentReport run_heat(const ExperimentConfig& cfg);
ExperimentReport run_deconvolution(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// (eps, delta) cells of a configuration in run order.
std::vector<std::pair<double, double>> experiment_cells(const ExperimentConfig& cfg);

/// Asks running experiments to stop after the replications in flight; the
/// report is then flagged partial.
void request_cancel();
void reset_cancel();

struct ReplicationDetail {
  Observation observation;
  std::optional<LepskiResult> lepski;
  GalerkinResult galerkin;
  PosteriorSummary posterior;
  ReplicationRecord record;
};

/// Re-runs replication `rep` of the (eps, delta) cell exactly as inside a
/// Monte Carlo run. If `trace` is non-null the chain trace is streamed to it.
ReplicationDetail run_replication(const ExperimentConfig& cfg, double eps, double delta, std::size_t rep,
                                  std::ostream* trace = nullptr);

enum ReportFormat : unsigned { kReportCsv = 1u, kReportSvg = 2u };

/// Writes rmise.csv, lepski_hist.csv and (for kReportSvg) one SVG per cell.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                               unsigned formats = kReportCsv | kReportSvg);

struct RmiseRow {
  double eps;
  double delta;
  double rmise_post;
  double rmise_galerkin;
  double rmse_theta;
  int n_mc;
};

std::vector<RmiseRow> read_rmise_csv(std::istream& is);
void write_rmise_csv(std::ostream& os, const ExperimentReport& report);
void write_level_histogram_csv(std::ostream& os, const ExperimentReport& report);
std::string render_cell_svg(const CellResult& cell, std::size_t n_points = 512, std::size_t n_draws = 20);

}  // namespace blindinv
