#include "blindinv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "blindinv/error.hpp"

namespace blindinv {

double ThetaParam::value() const {
  if (!scalar_) throw Error(ErrorCode::ModelMismatch, "theta is a sequence, not a scalar");
  return values_.front();
}

ThetaParam scaled(const ThetaParam& theta, double a) {
  ThetaParam out = theta;
  for (double& v : out.values()) v *= a;
  return out;
}

ThetaParam project_theta(const ThetaParam& theta, const BasisSpec& basis, int level) {
  if (theta.is_scalar()) return theta;
  const auto n = basis.level_count(level);
  if (n > theta.size()) {
    throw Error(ErrorCode::IndexOutOfTheta, "theta has " + std::to_string(theta.size()) +
                                                " levels, projection to level " + std::to_string(level) + " requested");
  }
  return ThetaParam::sequence(std::vector<double>(theta.values().begin(), theta.values().begin() + static_cast<std::ptrdiff_t>(n)));
}

OperatorModel OperatorModel::heat(double t_time) {
  if (!(t_time > 0.0)) throw Error(ErrorCode::ConfigError, "heat observation time must be positive");
  return {OperatorKind::Heat, t_time, BasisSpec::sine()};
}

OperatorModel OperatorModel::svd_diagonal(BasisSpec basis) { return {OperatorKind::SvdDiagonal, 0.0, basis}; }

std::string OperatorModel::describe() const {
  std::ostringstream os;
  if (kind == OperatorKind::Heat) {
    os << "heat(t=" << format_double(t_time) << ")";
  } else {
    os << "svd_diagonal(" << to_string(basis.kind) << ")";
  }
  return os.str();
}

double singular_value_at_level(const OperatorModel& model, const ThetaParam& theta, int level) {
  switch (model.kind) {
    case OperatorKind::Heat: {
      if (model.basis.kind != BasisKind::SinePeriodic) {
        throw Error(ErrorCode::ModelMismatch, "heat operator requires the sine basis");
      }
      const double k = level;
      return std::exp(-theta.value() * std::numbers::pi * std::numbers::pi * k * k * model.t_time);
    }
    case OperatorKind::SvdDiagonal: {
      if (theta.is_scalar()) throw Error(ErrorCode::ModelMismatch, "SVD-diagonal operator needs a theta sequence");
      const int slot = level - model.basis.first_level();
      if (slot < 0 || static_cast<std::size_t>(slot) >= theta.size()) {
        throw Error(ErrorCode::IndexOutOfTheta, "no singular value for level " + std::to_string(level));
      }
      return theta.values()[static_cast<std::size_t>(slot)];
    }
  }
  return 0.0;
}

double singular_value(const OperatorModel& model, const ThetaParam& theta, std::size_t index) {
  return singular_value_at_level(model, theta, model.basis.level_of(index));
}

CoefficientVector apply(const OperatorModel& model, const ThetaParam& theta, const CoefficientVector& f) {
  if (!(f.basis() == model.basis)) throw Error(ErrorCode::ModelMismatch, "basis of f differs from the operator basis");
  CoefficientVector out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = singular_value(model, theta, i) * f[i];
  return out;
}

std::vector<double> DiagonalMatrix::dense() const {
  const auto n = diag_.size();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = diag_[i];
  return m;
}

DiagonalMatrix projected_matrix(const OperatorModel& model, const ThetaParam& theta, int level) {
  const auto n = model.basis.dim(level);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = singular_value(model, theta, i);
  return DiagonalMatrix(std::move(d));
}

double inverse_opnorm(const OperatorModel& model, const ThetaParam& theta, int level) {
  const auto k = projected_matrix(model, theta, level);
  if (k.rows() == 0) return 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (double rho : k.diagonal()) smallest = std::min(smallest, std::abs(rho));
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / smallest;
}

double sigma_schedule(const OperatorModel& model, const ThetaParam& theta_ref, int level) {
  return std::abs(singular_value_at_level(model, theta_ref, level));
}

ThetaParam laplace_kernel_singular_values(double h, int max_level) {
  if (!(h > 0.0)) throw Error(ErrorCode::ConfigError, "kernel bandwidth must be positive");
  constexpr double pi = std::numbers::pi;
  const double e = std::exp(-1.0 / (2.0 * h));
  const double c_h = 2.0 * h * (1.0 + e);
  std::vector<double> rho(static_cast<std::size_t>(max_level) + 1);
  rho[0] = 1.0;
  for (int k = 1; k <= max_level; ++k) {
    // sin(pi k) vanishes and cos(pi k) = (-1)^k for integer k.
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    rho[static_cast<std::size_t>(k)] = (2.0 / h) / (c_h * (4.0 * pi * pi * k * k + 1.0 / (h * h))) * (1.0 - e * sign);
  }
  return ThetaParam::sequence(std::move(rho));
}

}  // namespace blindinv
