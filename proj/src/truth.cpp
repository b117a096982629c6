#include <cmath>
#include <numbers>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"

namespace blindinv {

CoefficientVector f0_coefficients(int level) {
  if (level < 1) throw Error(ErrorCode::LevelMismatch, "f0 needs level >= 1");
  constexpr double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
  CoefficientVector f(BasisSpec::sine(), level);
  for (int k = 1; k <= level; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double k3 = static_cast<double>(k) * k * k;
    f[static_cast<std::size_t>(k - 1)] = -8.0 * std::numbers::sqrt2 * (13.0 + 11.0 * sign) / (pi3 * k3);
  }
  return f;
}

CoefficientVector f0_trig_coefficients(int level) {
  if (level < 0) throw Error(ErrorCode::LevelMismatch, "negative level");
  constexpr double pi = std::numbers::pi;
  CoefficientVector f(BasisSpec::trigonometric(), level);
  f[0] = -2.0 / 3.0;
  for (int j = 1; j <= level; ++j) {
    const double jd = j;
    f[static_cast<std::size_t>(2 * j - 1)] = -24.0 * std::numbers::sqrt2 / (pi * pi * pi * jd * jd * jd);
    f[static_cast<std::size_t>(2 * j)] = 2.0 * std::numbers::sqrt2 / (pi * pi * jd * jd);
  }
  return f;
}

double f0_norm_squared() { return 184.0 / 105.0; }

double f0_value(double x) { return 4.0 * x * (1.0 - x) * (8.0 * x - 5.0); }

double f0_error_squared(const CoefficientVector& estimate) {
  const int level = std::max(estimate.level(), 1);
  const CoefficientVector truth = estimate.basis().kind == BasisKind::SinePeriodic ? f0_coefficients(level)
                                                                                  : f0_trig_coefficients(level);
  double inside = 0.0, captured = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - truth[i];
    inside += d * d;
    captured += truth[i] * truth[i];
  }
  return inside + std::max(0.0, f0_norm_squared() - captured);
}

}  // namespace blindinv
