#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"
#include "doctest.h"

using namespace blindinv;

namespace {

constexpr double kPi = std::numbers::pi;

double poly(double x) { return 4.0 * x * (1.0 - x) * (8.0 * x - 5.0); }

// Simpson rule on [0, 1] with n (even) panels.
template <class Fn>
double simpson(Fn&& fn, int n) {
  const double h = 1.0 / n;
  double s = fn(0.0) + fn(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(i * h);
  return s * h / 3.0;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig small_heat(int n_mc) {
  auto cfg = ExperimentConfig::heat61();
  cfg.n_mc = n_mc;
  cfg.chain.burn_in = 200;
  cfg.chain.n_keep = 100;
  cfg.chain.thin = 2;
  return cfg;
}

}  // namespace

TEST_CASE("f0 coefficients agree with quadrature of the polynomial") {
  const auto f = f0_coefficients(12);
  for (int k = 1; k <= 12; ++k) {
    const double q = simpson([k](double x) { return poly(x) * std::sqrt(2.0) * std::sin(kPi * k * x); }, 4000);
    CHECK(f[static_cast<std::size_t>(k - 1)] == doctest::Approx(q).epsilon(1e-10));
  }
  CHECK(std::abs(f[0]) == doctest::Approx(16 * std::sqrt(2.0) / std::pow(kPi, 3)));
  CHECK(std::abs(f[0]) == doctest::Approx(0.72977).epsilon(1e-4));
  CHECK(std::abs(f[1]) == doctest::Approx(1.09466).epsilon(1e-4));

  const auto t = f0_trig_coefficients(6);
  const auto trig = BasisSpec::trigonometric();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double q = simpson([&](double x) { return poly(x) * trig.evaluate(i, x); }, 4000);
    CHECK(t[i] == doctest::Approx(q).epsilon(1e-9));
  }
  CHECK(simpson([](double x) { return poly(x) * poly(x); }, 4000) == doctest::Approx(f0_norm_squared()).epsilon(1e-12));
}

TEST_CASE("series synthesis converges to f0") {
  const auto f = f0_coefficients(200);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 999.0;
    worst = std::max(worst, std::abs(evaluate_at(f, x) - poly(x)));
    CHECK(f0_value(x) == doctest::Approx(poly(x)));
  }
  CHECK(worst < 1e-3);
  CHECK(std::sqrt(f0_norm_squared()) == doctest::Approx(1.324).epsilon(1e-3));
  // A relative error of 8.6% corresponds to RMISE 0.1142.
  CHECK(0.1142 / std::sqrt(f0_norm_squared()) == doctest::Approx(0.086).epsilon(0.02));
}

TEST_CASE("error in coefficient space equals error by grid quadrature") {
  const auto cfg = small_heat(1);
  const auto d = run_replication(cfg, 1e-6, 1e-6, 0);
  const auto& est = d.posterior.mean_f;
  const std::size_t n = (1u << 14) + 1;
  const auto pts = evaluate_on_grid(est, n);
  const double h = 1.0 / static_cast<double>(n - 1);
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    q += w * std::pow(pts[i].value - poly(pts[i].x), 2);
  }
  q *= h;
  CHECK(std::sqrt(f0_error_squared(est)) == doctest::Approx(std::sqrt(q)).epsilon(1e-4));
}

TEST_CASE("configuration parsing") {
  ExperimentConfig cfg;
  std::istringstream is(
      "# comment line\n"
      "preset = deconv\n"
      "eps = 1e-2, 1e-3   # trailing comment\n"
      "delta = 1e-2,1e-3\n"
      "n_mc = 20\n"
      "seed = 7\n"
      "lepski_delta = 0.5\n");
  cfg.load(is);
  CHECK(cfg.preset == Preset::Deconv62);
  CHECK(cfg.pipeline() == ModelChoice::Deconvolution);
  CHECK(cfg.eps_grid == std::vector<double>{1e-2, 1e-3});
  CHECK(cfg.n_mc == 20);
  CHECK(cfg.base_seed == 7);
  CHECK(cfg.lepski->delta_tune == 0.5);
  CHECK(cfg.lepski->exponent() == 1.5);
  cfg.validate();

  // The echo reloads to the same settings.
  ExperimentConfig again;
  std::istringstream echo(cfg.echo());
  again.load(echo);
  CHECK(again.echo() == cfg.echo());

  ExperimentConfig bad;
  CHECK_THROWS_AS(bad.set("no_such_key", "1"), Error);
  CHECK_THROWS_AS(bad.set("n_mc", "ten"), Error);
  CHECK_THROWS_AS(bad.set("paired", "maybe"), Error);
  CHECK_THROWS_AS(bad.set("preset", "table9"), Error);
  bad.set("eps", "");
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ExperimentConfig::heat61();
  bad.n_mc = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ExperimentConfig::deconv62();
  bad.delta_grid = {1e-2};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ExperimentConfig::deconv62();
  bad.lepski.reset();
  CHECK_THROWS_AS(bad.validate(), Error);
  std::istringstream no_eq("eps 1e-3\n");
  CHECK_THROWS_AS(ExperimentConfig{}.load(no_eq), Error);
  CHECK_THROWS_AS(ExperimentConfig{}.load_file("/nonexistent/blindinv.cfg"), Error);
  try {
    ExperimentConfig{}.set("seed", "-3");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("experiment cells") {
  auto heat = ExperimentConfig::heat61();
  CHECK(experiment_cells(heat).size() == 9);
  CHECK(experiment_cells(heat)[1] == std::pair<double, double>{1e-4, 1e-6});
  const auto dec = ExperimentConfig::deconv62();
  CHECK(experiment_cells(dec).size() == 2);
  CHECK(experiment_cells(dec)[1] == std::pair<double, double>{1e-3, 1e-3});
  CHECK_THROWS_AS(run_deconvolution(heat), Error);
  CHECK_THROWS_AS(run_heat(dec), Error);
}

TEST_CASE("noiseless deconvolution run recovers the truncated truth") {
  auto cfg = ExperimentConfig::deconv62();
  cfg.noiseless = true;
  cfg.n_mc = 1;
  cfg.eps_grid = {1e-3};
  cfg.delta_grid = {1e-3};
  cfg.chain.burn_in = 10;
  cfg.chain.n_keep = 10;
  cfg.chain.thin = 1;
  const auto rep = run_deconvolution(cfg);
  REQUIRE(rep.cells.size() == 1);
  const auto& c = rep.cells[0];
  REQUIRE(c.records.size() == 1);
  const int j = c.records[0].level;
  const auto truth = f0_trig_coefficients(j);
  const double bias = std::sqrt(f0_norm_squared() - l2_norm(truth) * l2_norm(truth));
  CHECK(c.rmise_post == doctest::Approx(bias).epsilon(1e-10));
  CHECK(c.rmise_galerkin == doctest::Approx(bias).epsilon(1e-10));
  CHECK(c.rmse_theta == doctest::Approx(0.0));
}

TEST_CASE("replications are reproducible individually and in bulk") {
  auto cfg = small_heat(6);
  cfg.eps_grid = {1e-6};
  cfg.delta_grid = {1e-6};
  cfg.threads = 3;
  const auto rep = run_heat(cfg);
  REQUIRE(rep.cells.size() == 1);
  const auto& c = rep.cells[0];
  CHECK(c.n_mc == 6);
  for (std::size_t r = 0; r < 6; ++r) {
    const auto d = run_replication(cfg, 1e-6, 1e-6, r);
    CHECK(d.record.seed == cfg.base_seed + r);
    CHECK(d.record.err2_post == c.records[r].err2_post);
    CHECK(d.record.err2_theta == c.records[r].err2_theta);
  }
  CHECK(c.level_hist.at(4) == 6);
  CHECK(c.example.has_value());
  CHECK(c.example->draws.size() == 20);
}

TEST_CASE("reports are deterministic and round-trip") {
  auto cfg = small_heat(8);
  cfg.eps_grid = {1e-4, 1e-6};
  cfg.delta_grid = {1e-6};
  const auto base = std::filesystem::temp_directory_path() / "blindinv_report_test";
  std::filesystem::remove_all(base);

  cfg.threads = 1;
  const auto a = run_heat(cfg);
  cfg.threads = 4;
  const auto b = run_heat(cfg);
  const auto files_a = emit_report(a, base / "a");
  emit_report(b, base / "b");
  for (const auto& name : {"rmise.csv", "lepski_hist.csv", "replications.csv", "config.txt"}) {
    CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
  }
  CHECK(files_a.size() == 7);
  CHECK(std::filesystem::exists(base / "a" / "summary.txt"));
  const auto svg = slurp(base / "a" / "cell_0_eps0.0001_delta1e-06.svg");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(render_cell_svg(a.cells[0]) == render_cell_svg(b.cells[0]));

  std::ifstream is(base / "a" / "rmise.csv");
  const auto rows = read_rmise_csv(is);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rows[i].eps == a.cells[i].eps);
    CHECK(rows[i].rmise_post == a.cells[i].rmise_post);
    CHECK(rows[i].rmise_galerkin == a.cells[i].rmise_galerkin);
    CHECK(rows[i].rmse_theta == a.cells[i].rmse_theta);
    CHECK(rows[i].n_mc == 8);
  }
  CHECK(slurp(base / "a" / "lepski_hist.csv") == "level,count\n3,8\n4,8\n");

  ExperimentReport one;
  one.config = cfg;
  one.cells.push_back(a.cells[0]);
  std::ostringstream os;
  write_rmise_csv(os, one);
  std::size_t lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  CHECK(lines == 2);

  // Writing into a path below a regular file fails with the path in the message.
  std::ofstream(base / "blocker") << "x";
  try {
    emit_report(a, base / "blocker" / "sub");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
  std::filesystem::remove_all(base);
}

TEST_CASE("posterior RMISE decreases along the noise diagonal") {
  auto cfg = ExperimentConfig::heat61();
  cfg.n_mc = 100;
  cfg.paired = true;
  const auto rep = run_heat(cfg);
  REQUIRE(rep.cells.size() == 3);
  CHECK(rep.cells[2].rmise_post < rep.cells[1].rmise_post);
  CHECK(rep.cells[1].rmise_post < rep.cells[0].rmise_post);
}

TEST_CASE("cancellation yields a partial report") {
  auto cfg = small_heat(50);
  request_cancel();
  const auto rep = run_heat(cfg);
  reset_cancel();
  CHECK(rep.partial);
  CHECK(rep.cells.empty());
}
