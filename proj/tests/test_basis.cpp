#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "blindinv/basis.hpp"
#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"
#include "doctest.h"

using namespace blindinv;

namespace {

CoefficientVector random_vector(BasisSpec basis, int level, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  CoefficientVector f(basis, level);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(gen);
  return f;
}

// Composite trapezoid rule for the squared synthesis on n points.
double trapezoid_square(const CoefficientVector& f, std::size_t n) {
  const auto pts = evaluate_on_grid(f, n);
  const double h = 1.0 / static_cast<double>(n - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * pts[i].value * pts[i].value;
  }
  return s * h;
}

}  // namespace

TEST_CASE("basis dimensions and level ordering") {
  const auto sine = BasisSpec::sine();
  const auto trig = BasisSpec::trigonometric();
  CHECK(sine.dim(4) == 4);
  CHECK(trig.dim(3) == 7);
  CHECK(trig.dim(0) == 1);
  CHECK(sine.level_of(0) == 1);
  CHECK(sine.level_of(3) == 4);
  CHECK(trig.level_of(0) == 0);
  CHECK(trig.level_of(1) == 1);
  CHECK(trig.level_of(2) == 1);
  CHECK(trig.level_of(3) == 2);
  CHECK(sine.first_level() == 1);
  CHECK(trig.first_level() == 0);
  CHECK(trig.level_count(3) == 4);
  CHECK(sine.level_count(3) == 3);

  BasisSpec dyadic = sine;
  dyadic.scaling = LevelScaling::Dyadic;
  CHECK_THROWS_AS(dyadic.dim(2), Error);
}

TEST_CASE("basis functions match their closed forms") {
  const auto trig = BasisSpec::trigonometric();
  const double x = 0.3;
  CHECK(trig.evaluate(0, x) == doctest::Approx(1.0));
  CHECK(trig.evaluate(1, x) == doctest::Approx(std::sqrt(2.0) * std::sin(2 * std::numbers::pi * x)));
  CHECK(trig.evaluate(4, x) == doctest::Approx(std::sqrt(2.0) * std::cos(4 * std::numbers::pi * x)));
  CHECK(BasisSpec::sine().evaluate(2, x) == doctest::Approx(std::sqrt(2.0) * std::sin(3 * std::numbers::pi * x)));
}

TEST_CASE("project truncates and never pads") {
  CoefficientVector f(BasisSpec::sine(), 3, {1.0, 2.0, 3.0});
  const auto p = project(f, 2);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 2.0);
  CHECK(project(f, 3) == f);
  CHECK(project(f, 10) == f);
  CHECK(project(project(f, 2), 2) == project(f, 2));
  CHECK(l2_norm(project(CoefficientVector(BasisSpec::sine(), 5), 2)) == 0.0);
  CHECK(resize_to_level(p, 4).size() == 4);
  CHECK(resize_to_level(p, 4)[3] == 0.0);
}

TEST_CASE("constructor rejects a mismatched coefficient count") {
  CHECK_THROWS_AS(CoefficientVector(BasisSpec::sine(), 3, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(CoefficientVector(BasisSpec::trigonometric(), 1, {1.0, 2.0}), Error);
}

TEST_CASE("norms") {
  CHECK(l2_norm(CoefficientVector(BasisSpec::sine(), 4)) == 0.0);
  CHECK(l2_norm(CoefficientVector(BasisSpec::sine(), 1, {3.0})) == 3.0);

  CoefficientVector e2(BasisSpec::sine(), 2, {0.0, 1.0});
  CHECK(sobolev_norm(e2, 1.0) == doctest::Approx(2.0));

  const auto f = random_vector(BasisSpec::trigonometric(), 6, 7);
  CHECK(sobolev_norm(f, 0.0) == l2_norm(f));

  // Closed-form coefficient sum for k <= 50, written out independently of the library.
  double s = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double c = 8.0 * std::sqrt(2.0) * (13.0 + 11.0 * ((k % 2) ? -1.0 : 1.0)) / std::pow(std::numbers::pi * k, 3);
    s += c * c;
  }
  CHECK(l2_norm(f0_coefficients(50)) == doctest::Approx(std::sqrt(s)).epsilon(1e-14));
  CHECK(l2_norm(f0_coefficients(50)) == doctest::Approx(1.3239).epsilon(1e-3));
}

TEST_CASE("Sobolev norm of f0 is stable below 5/2 and grows above") {
  // Coefficients decay like k^-3, so the series converges only for s < 5/2.
  auto growth = [](double s) {
    return sobolev_norm(f0_coefficients(800), s) / sobolev_norm(f0_coefficients(200), s) - 1.0;
  };
  CHECK(growth(2.2) < 0.02);
  CHECK(growth(2.4) < growth(2.6) / 3.0);
  CHECK(growth(2.6) > 0.15);
  CHECK(std::isfinite(sobolev_norm(f0_coefficients(200), 2.4)));
}

TEST_CASE("Parseval against trapezoid quadrature") {
  for (auto basis : {BasisSpec::sine(), BasisSpec::trigonometric()}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto f = random_vector(basis, 8, seed);
      const double n2 = l2_norm(f) * l2_norm(f);
      CHECK(trapezoid_square(f, 10000) == doctest::Approx(n2).epsilon(1e-6));
    }
  }
}

TEST_CASE("grid synthesis") {
  const auto zero = evaluate_on_grid(CoefficientVector(BasisSpec::sine(), 3), 11);
  for (const auto& p : zero) CHECK(p.value == 0.0);

  CoefficientVector e1(BasisSpec::sine(), 1, {1.0});
  const auto pts = evaluate_on_grid(e1, 3);
  CHECK(pts[1].x == 0.5);
  CHECK(pts[1].value == doctest::Approx(std::sqrt(2.0)));

  // Truncation tail at k <= 50 is bounded by sum_{k>50} 48 sqrt(2)/(pi^3 k^3) sqrt(2) < 2e-3.
  const double poly = 4 * 0.25 * 0.75 * (8 * 0.25 - 5);
  CHECK(poly == doctest::Approx(-2.25));
  CHECK(evaluate_at(f0_coefficients(50), 0.25) == doctest::Approx(poly).epsilon(1e-3));
  CHECK_THROWS_AS(evaluate_on_grid(e1, 1), Error);
}

TEST_CASE("Jackson-type decay of the truncation bias") {
  const auto full = f0_coefficients(4096);
  auto bias = [&](int j) { return l2_distance(full, project(full, j)); };
  // For s < 5/2 the weighted bias j^s ||f0 - P_j f0|| is eventually decreasing.
  auto weighted = [&](int j, double s) { return bias(j) * std::pow(j, s); };
  for (int j = 32; j <= 1024; j *= 2) CHECK(weighted(2 * j, 2.4) <= weighted(j, 2.4));
  CHECK(weighted(1024, 2.6) > weighted(64, 2.6));
}

TEST_CASE("vector arithmetic") {
  const auto a = random_vector(BasisSpec::sine(), 5, 11);
  const auto b = random_vector(BasisSpec::sine(), 5, 12);
  const auto c = axpy(2.0, a, b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(c[i] == 2.0 * a[i] + b[i]);
  CHECK(dot(a, a) == doctest::Approx(l2_norm(a) * l2_norm(a)));
  CHECK(l2_norm(scaled(a, -3.0)) == doctest::Approx(3.0 * l2_norm(a)));
  const auto short_b = project(b, 2);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += std::pow(a[i] - (i < 2 ? b[i] : 0.0), 2);
  CHECK(l2_distance(a, short_b) == doctest::Approx(std::sqrt(d2)));
}

TEST_CASE("coefficient CSV round-trips bit-exactly") {
  for (auto basis : {BasisSpec::sine(), BasisSpec::trigonometric()}) {
    auto f = random_vector(basis, 5, 99);
    f[0] = 1.0 / 3.0;
    f[1] = -5e-300;
    std::stringstream ss;
    write_coefficients_csv(ss, f);
    CHECK(ss.str().rfind("index,level,coeff\n", 0) == 0);
    const auto g = read_coefficients_csv(ss, basis);
    CHECK(g == f);
  }
  std::stringstream bad("index,level,coeff\n0,2,1.0\n");
  CHECK_THROWS_AS(read_coefficients_csv(bad, BasisSpec::sine()), Error);
  std::stringstream header("idx,level,coeff\n");
  CHECK_THROWS_AS(read_coefficients_csv(header, BasisSpec::sine()), Error);
}
