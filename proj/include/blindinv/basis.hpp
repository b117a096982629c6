#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace blindinv {

enum class BasisKind {
  /// phi_k = sqrt(2) sin(pi k x), k >= 1.
  SinePeriodic,
  /// phi_0 = 1, phi_{j,0} = sqrt(2) sin(2 pi j x), phi_{j,1} = sqrt(2) cos(2 pi j x).
  Trigonometric,
};

/// Linear: V_j holds the functions of level <= j. Dyadic is representable
/// but no dyadic basis is implemented.
enum class LevelScaling { Linear, Dyadic };

struct BasisSpec {
  BasisKind kind = BasisKind::SinePeriodic;
  int dim_d = 1;
  LevelScaling scaling = LevelScaling::Linear;

  static BasisSpec sine() { return {BasisKind::SinePeriodic, 1, LevelScaling::Linear}; }
  static BasisSpec trigonometric() { return {BasisKind::Trigonometric, 1, LevelScaling::Linear}; }

  /// Number of basis functions in V_level.
  std::size_t dim(int level) const;
  /// |k| of the flattened index. Trigonometric ordering: constant, then for
  /// each level j the sine term followed by the cosine term.
  int level_of(std::size_t index) const;
  /// Smallest level carrying a basis function (1 for sine, 0 for trig).
  int first_level() const;
  /// Number of distinct levels in V_level, i.e. the length of a level-indexed
  /// sequence covering V_level.
  std::size_t level_count(int level) const;
  /// Evaluate phi_index at x.
  double evaluate(std::size_t index, double x) const;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

std::string to_string(BasisKind kind);

/// A function represented by its basis coefficients up to a truncation level.
class CoefficientVector {
 public:
  CoefficientVector() = default;
  /// Zero vector of the given level.
  CoefficientVector(BasisSpec basis, int level);
  CoefficientVector(BasisSpec basis, int level, std::vector<double> coeffs);

  const BasisSpec& basis() const { return basis_; }
  int level() const { return level_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  int level_of(std::size_t i) const { return basis_.level_of(i); }

  friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

 private:
  BasisSpec basis_{};
  int level_ = 0;
  std::vector<double> coeffs_;
};

CoefficientVector project(const CoefficientVector& f, int level);
/// Zero-pads (or truncates) to the requested level.
CoefficientVector resize_to_level(const CoefficientVector& f, int level);

double l2_norm(const CoefficientVector& f);
/// l2 distance with the shorter vector zero-padded.
double l2_distance(const CoefficientVector& a, const CoefficientVector& b);
/// (sum_k max(|k|,1)^{2s} f_k^2)^{1/2}; the constant trigonometric term gets weight 1.
double sobolev_norm(const CoefficientVector& f, double s);

CoefficientVector scaled(const CoefficientVector& f, double a);
CoefficientVector axpy(double a, const CoefficientVector& x, const CoefficientVector& y);
double dot(const CoefficientVector& a, const CoefficientVector& b);

struct GridPoint {
  double x;
  double value;
};

/// Synthesises sum_k f_k phi_k on n_points uniformly spaced points of [0, 1].
std::vector<GridPoint> evaluate_on_grid(const CoefficientVector& f, std::size_t n_points);
double evaluate_at(const CoefficientVector& f, double x);

/// CSV with header `index,level,coeff`, values at 17 significant digits.
void write_coefficients_csv(std::ostream& os, const CoefficientVector& f);
/// Parses the CSV produced by write_coefficients_csv. The basis must be given
/// since an empty vector does not determine it.
CoefficientVector read_coefficients_csv(std::istream& is, BasisSpec basis);

std::string format_double(double v);

}  // namespace blindinv
