#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "blindinv/error.hpp"
#include "blindinv/operators.hpp"
#include "doctest.h"

using namespace blindinv;

namespace {

constexpr double kPi = std::numbers::pi;

CoefficientVector random_vector(BasisSpec basis, int level, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  CoefficientVector f(basis, level);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = nd(gen);
  return f;
}

// Periodic Laplace kernel coefficient by direct numerical integration:
// 2 * int_0^{1/2} exp(-x/h)/C_h cos(2 pi k x) dx, Simpson rule, with the
// stated constant C_h = 2h(1 + e^{-1/(2h)}).
double laplace_by_quadrature(double h, int k) {
  const double c = 2.0 * h * (1.0 + std::exp(-1.0 / (2.0 * h)));
  const int n = 20000;
  const double dx = 0.5 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * dx;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::exp(-x / h) * std::cos(2 * kPi * k * x);
  }
  return 2.0 * s * dx / 3.0 / c;
}

}  // namespace

TEST_CASE("heat singular values") {
  const auto heat = OperatorModel::heat(0.1);
  CHECK(singular_value(heat, ThetaParam::scalar(1.0), 0) == doctest::Approx(std::exp(-0.1 * kPi * kPi)));
  CHECK(singular_value(heat, ThetaParam::scalar(1.0), 0) == doctest::Approx(0.37273).epsilon(1e-4));
  CHECK(singular_value(heat, ThetaParam::scalar(0.0), 7) == 1.0);
  CHECK(singular_value_at_level(heat, ThetaParam::scalar(1.0), 2) == doctest::Approx(std::exp(-0.4 * kPi * kPi)));
  CHECK(singular_value(heat, ThetaParam::scalar(-1.0), 0) > 1.0);
  const auto svd = OperatorModel::svd_diagonal(BasisSpec::sine());
  CHECK_THROWS_AS(singular_value(svd, ThetaParam::scalar(1.0), 0), Error);
}

TEST_CASE("Laplace kernel singular values") {
  const auto theta = laplace_kernel_singular_values(0.1, 6);
  REQUIRE(theta.size() == 7);
  CHECK(theta.values()[0] == doctest::Approx(1.0));
  CHECK(theta.values()[1] == doctest::Approx(0.71695).epsilon(1e-4));
  CHECK(theta.values()[2] == doctest::Approx(0.38253).epsilon(1e-4));
  for (int k = 1; k <= 6; ++k) CHECK(theta.values()[k] == doctest::Approx(laplace_by_quadrature(0.1, k)).epsilon(1e-8));

  const auto svd = OperatorModel::svd_diagonal(BasisSpec::trigonometric());
  // Sine and cosine of one level share a singular value.
  CHECK(singular_value(svd, theta, 3) == singular_value(svd, theta, 4));
  CHECK(singular_value(svd, theta, 3) == theta.values()[2]);
  CHECK_THROWS_AS(singular_value(svd, theta, 2 * 7 + 1), Error);
  CHECK(sigma_schedule(svd, theta, 2) == doctest::Approx(0.38253).epsilon(1e-4));
}

TEST_CASE("theta parameter shape handling") {
  CHECK(ThetaParam::scalar(2.0).value() == 2.0);
  CHECK_THROWS_AS(ThetaParam::sequence({1.0, 2.0}).value(), Error);
  const auto seq = ThetaParam::sequence({1.0, 0.5, 0.25, 0.125});
  CHECK(project_theta(seq, BasisSpec::trigonometric(), 1).size() == 2);
  CHECK(project_theta(seq, BasisSpec::sine(), 2).size() == 2);
  CHECK_THROWS_AS(project_theta(seq, BasisSpec::trigonometric(), 4), Error);
  CHECK(scaled(seq, 2.0).values()[3] == 0.25);
}

TEST_CASE("apply") {
  std::mt19937_64 gen(5);
  const auto heat = OperatorModel::heat(0.1);
  const auto f = random_vector(BasisSpec::sine(), 6, gen);
  CHECK(apply(heat, ThetaParam::scalar(0.0), f) == f);
  CHECK(l2_norm(apply(heat, ThetaParam::scalar(1.0), CoefficientVector(BasisSpec::sine(), 6))) == 0.0);

  const auto svd = OperatorModel::svd_diagonal(BasisSpec::trigonometric());
  const auto theta = laplace_kernel_singular_values(0.1, 5);
  const auto g = random_vector(BasisSpec::trigonometric(), 5, gen);
  const auto kg = apply(svd, theta, g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(kg[i] == theta.values()[BasisSpec::trigonometric().level_of(i)] * g[i]);
}

TEST_CASE("scaling non-identifiability") {
  std::mt19937_64 gen(6);
  const auto svd = OperatorModel::svd_diagonal(BasisSpec::trigonometric());
  const auto theta = laplace_kernel_singular_values(0.1, 6);
  for (double a : {2.0, 4.0, 0.5, -8.0}) {
    const auto f = random_vector(BasisSpec::trigonometric(), 6, gen);
    const auto lhs = apply(svd, scaled(theta, 1.0 / a), scaled(f, a));
    const auto rhs = apply(svd, theta, f);
    // Powers of two scale exactly in binary floating point.
    CHECK(lhs == rhs);
  }
  const auto f = random_vector(BasisSpec::trigonometric(), 6, gen);
  const auto lhs = apply(svd, scaled(theta, 1.0 / 3.0), scaled(f, 3.0));
  CHECK(l2_distance(lhs, apply(svd, theta, f)) <= 1e-15 * l2_norm(f));
}

TEST_CASE("linearity and self-adjointness") {
  std::mt19937_64 gen(8);
  const auto heat = OperatorModel::heat(0.1);
  const auto th = ThetaParam::scalar(0.8);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_vector(BasisSpec::sine(), 8, gen);
    const auto g = random_vector(BasisSpec::sine(), 8, gen);
    const double a = std::normal_distribution<double>()(gen);
    const auto lhs = apply(heat, th, axpy(a, f, g));
    const auto rhs = axpy(a, apply(heat, th, f), apply(heat, th, g));
    CHECK(l2_distance(lhs, rhs) <= 1e-14 * (1.0 + l2_norm(rhs)));
    CHECK(dot(apply(heat, th, f), g) == doctest::Approx(dot(f, apply(heat, th, g))).epsilon(1e-13));
  }
}

TEST_CASE("projected matrix and inverse norm") {
  const auto heat = OperatorModel::heat(0.1);
  const auto m = projected_matrix(heat, ThetaParam::scalar(1.0), 2);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == doctest::Approx(0.37273).epsilon(1e-4));
  CHECK(m(1, 1) == doctest::Approx(0.01931).epsilon(1e-3));
  CHECK(m(0, 1) == 0.0);
  CHECK(m.dense().size() == 4);
  CHECK(projected_matrix(heat, ThetaParam::scalar(1.0), 1).rows() == 1);
  CHECK(inverse_opnorm(heat, ThetaParam::scalar(1.0), 2) == doctest::Approx(std::exp(0.4 * kPi * kPi)));
  CHECK(inverse_opnorm(heat, ThetaParam::scalar(1.0), 2) == doctest::Approx(51.79).epsilon(1e-3));

  const auto svd = OperatorModel::svd_diagonal(BasisSpec::trigonometric());
  const auto ones = ThetaParam::sequence(std::vector<double>(5, 1.0));
  const auto id = projected_matrix(svd, ones, 3);
  for (std::size_t i = 0; i < id.rows(); ++i) CHECK(id(i, i) == 1.0);
  CHECK(inverse_opnorm(svd, ones, 3) == 1.0);
  CHECK(inverse_opnorm(svd, ThetaParam::sequence({1.0, 0.0, 1.0}), 2) == std::numeric_limits<double>::infinity());
  CHECK(sigma_schedule(heat, ThetaParam::scalar(1.0), 1) == doctest::Approx(0.37273).epsilon(1e-4));
  CHECK(sigma_schedule(heat, ThetaParam::scalar(0.0), 5) == 1.0);
}

TEST_CASE("inverse norm attains the nominal scale for diagonal heat operators") {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  const auto heat = OperatorModel::heat(0.1);
  for (int rep = 0; rep < 100; ++rep) {
    const auto th = ThetaParam::scalar(ud(gen));
    for (int j = 1; j <= 8; ++j) {
      CHECK(inverse_opnorm(heat, th, j) <= 1.0 / sigma_schedule(heat, th, j) + 1e-9);
    }
  }
}
