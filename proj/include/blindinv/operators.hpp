#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blindinv/basis.hpp"

namespace blindinv {

/// Unknown operator parameter: a scalar (heat diffusivity) or a sequence of
/// singular values indexed by level, starting at basis.first_level().
class ThetaParam {
 public:
  ThetaParam() = default;
  static ThetaParam scalar(double value) { return ThetaParam(true, {value}); }
  static ThetaParam sequence(std::vector<double> values) { return ThetaParam(false, std::move(values)); }

  bool is_scalar() const { return scalar_; }
  double value() const;
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const ThetaParam&, const ThetaParam&) = default;

 private:
  ThetaParam(bool scalar, std::vector<double> v) : scalar_(scalar), values_(std::move(v)) {}
  bool scalar_ = true;
  std::vector<double> values_{0.0};
};

/// theta with every coordinate multiplied by a.
ThetaParam scaled(const ThetaParam& theta, double a);
/// Keeps the coordinates of levels <= level (scalars are returned unchanged).
ThetaParam project_theta(const ThetaParam& theta, const BasisSpec& basis, int level);

enum class OperatorKind { Heat, SvdDiagonal };

/// Forward operator diagonal in a fixed basis.
struct OperatorModel {
  OperatorKind kind = OperatorKind::Heat;
  /// Observation time of the heat model.
  double t_time = 0.1;
  BasisSpec basis = BasisSpec::sine();

  static OperatorModel heat(double t_time);
  static OperatorModel svd_diagonal(BasisSpec basis);

  std::string describe() const;
};

/// rho_{theta,k} for the flattened basis index k.
double singular_value(const OperatorModel& model, const ThetaParam& theta, std::size_t index);
/// rho_{theta,k} for any k with |k| = level.
double singular_value_at_level(const OperatorModel& model, const ThetaParam& theta, int level);

CoefficientVector apply(const OperatorModel& model, const ThetaParam& theta, const CoefficientVector& f);

/// K_{theta,j} for a diagonal operator.
class DiagonalMatrix {
 public:
  explicit DiagonalMatrix(std::vector<double> diagonal) : diag_(std::move(diagonal)) {}

  std::size_t rows() const { return diag_.size(); }
  std::size_t cols() const { return diag_.size(); }
  double operator()(std::size_t r, std::size_t c) const { return r == c ? diag_[r] : 0.0; }
  const std::vector<double>& diagonal() const { return diag_; }
  /// Row-major dense copy.
  std::vector<double> dense() const;

 private:
  std::vector<double> diag_;
};

DiagonalMatrix projected_matrix(const OperatorModel& model, const ThetaParam& theta, int level);

/// ||K_{theta,j}^{-1}||; +infinity when the projected operator is singular.
double inverse_opnorm(const OperatorModel& model, const ThetaParam& theta, int level);

/// Nominal ill-posedness scale sigma_j at a reference parameter.
double sigma_schedule(const OperatorModel& model, const ThetaParam& theta_ref, int level);

/// Singular values of the periodic Laplace kernel exp(-|x|/h)/C_h on
/// [-1/2, 1/2], one per level 0..max_level (rho_0 = 1).
ThetaParam laplace_kernel_singular_values(double bandwidth, int max_level);

}  // namespace blindinv
