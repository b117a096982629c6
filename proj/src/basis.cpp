#include "blindinv/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "blindinv/error.hpp"
#include "csv_util.hpp"

namespace blindinv {

namespace {

void require_linear(const BasisSpec& b) {
  if (b.scaling != LevelScaling::Linear || b.dim_d != 1) {
    throw Error(ErrorCode::Unsupported, "only one-dimensional bases with linear level scaling are implemented");
  }
}

}  // namespace

std::size_t BasisSpec::dim(int level) const {
  require_linear(*this);
  if (level < 0) throw Error(ErrorCode::LevelMismatch, "negative level");
  switch (kind) {
    case BasisKind::SinePeriodic: return static_cast<std::size_t>(level);
    case BasisKind::Trigonometric: return 1 + 2 * static_cast<std::size_t>(level);
  }
  return 0;
}

int BasisSpec::level_of(std::size_t index) const {
  switch (kind) {
    case BasisKind::SinePeriodic: return static_cast<int>(index) + 1;
    case BasisKind::Trigonometric: return static_cast<int>((index + 1) / 2);
  }
  return 0;
}

int BasisSpec::first_level() const { return kind == BasisKind::SinePeriodic ? 1 : 0; }

std::size_t BasisSpec::level_count(int level) const {
  if (level < first_level()) return 0;
  return static_cast<std::size_t>(level - first_level() + 1);
}

double BasisSpec::evaluate(std::size_t index, double x) const {
  constexpr double pi = std::numbers::pi;
  const double sqrt2 = std::numbers::sqrt2;
  switch (kind) {
    case BasisKind::SinePeriodic:
      return sqrt2 * std::sin(pi * static_cast<double>(index + 1) * x);
    case BasisKind::Trigonometric: {
      if (index == 0) return 1.0;
      const double j = static_cast<double>((index + 1) / 2);
      return (index % 2 == 1) ? sqrt2 * std::sin(2 * pi * j * x) : sqrt2 * std::cos(2 * pi * j * x);
    }
  }
  return 0.0;
}

std::string to_string(BasisKind kind) {
  return kind == BasisKind::SinePeriodic ? "sine" : "trigonometric";
}

CoefficientVector::CoefficientVector(BasisSpec basis, int level)
    : basis_(basis), level_(level), coeffs_(basis.dim(level), 0.0) {}

CoefficientVector::CoefficientVector(BasisSpec basis, int level, std::vector<double> coeffs)
    : basis_(basis), level_(level), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.dim(level_)) {
    throw Error(ErrorCode::LevelMismatch, "coefficient count " + std::to_string(coeffs_.size()) +
                                              " does not match dim(V_" + std::to_string(level_) + ")");
  }
}

CoefficientVector project(const CoefficientVector& f, int level) {
  if (level < 0) throw Error(ErrorCode::LevelMismatch, "negative projection level");
  if (level >= f.level()) return f;
  auto c = f.coeffs();
  const auto n = f.basis().dim(level);
  return CoefficientVector(f.basis(), level, std::vector<double>(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)));
}

CoefficientVector resize_to_level(const CoefficientVector& f, int level) {
  if (level <= f.level()) return project(f, level);
  CoefficientVector out(f.basis(), level);
  std::copy(f.coeffs().begin(), f.coeffs().end(), out.coeffs().begin());
  return out;
}

double l2_norm(const CoefficientVector& f) {
  double s = 0.0;
  for (double c : f.coeffs()) s += c * c;
  return std::sqrt(s);
}

double l2_distance(const CoefficientVector& a, const CoefficientVector& b) {
  if (!(a.basis() == b.basis())) throw Error(ErrorCode::ModelMismatch, "bases differ");
  const auto& longer = a.size() >= b.size() ? a : b;
  const auto& shorter = a.size() >= b.size() ? b : a;
  double s = 0.0;
  for (std::size_t i = 0; i < longer.size(); ++i) {
    const double d = longer[i] - (i < shorter.size() ? shorter[i] : 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

double sobolev_norm(const CoefficientVector& f, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = std::max(1, f.level_of(i));
    acc += std::pow(k, 2.0 * s) * f[i] * f[i];
  }
  return std::sqrt(acc);
}

CoefficientVector scaled(const CoefficientVector& f, double a) {
  CoefficientVector out = f;
  for (double& c : out.coeffs()) c *= a;
  return out;
}

CoefficientVector axpy(double a, const CoefficientVector& x, const CoefficientVector& y) {
  if (!(x.basis() == y.basis()) || x.level() != y.level()) {
    throw Error(ErrorCode::LevelMismatch, "axpy operands differ in basis or level");
  }
  CoefficientVector out = y;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
  return out;
}

double dot(const CoefficientVector& a, const CoefficientVector& b) {
  const auto n = std::min(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double evaluate_at(const CoefficientVector& f, double x) {
  double v = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) v += f[i] * f.basis().evaluate(i, x);
  return v;
}

std::vector<GridPoint> evaluate_on_grid(const CoefficientVector& f, std::size_t n_points) {
  if (n_points < 2) throw Error(ErrorCode::Unsupported, "grid needs at least two points");
  std::vector<GridPoint> out;
  out.reserve(n_points);
  const double h = 1.0 / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = static_cast<double>(i) * h;
    out.push_back({x, evaluate_at(f, x)});
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_coefficients_csv(std::ostream& os, const CoefficientVector& f) {
  os << "index,level,coeff\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << i << ',' << f.level_of(i) << ',' << format_double(f[i]) << '\n';
  }
}

CoefficientVector read_coefficients_csv(std::istream& is, BasisSpec basis) {
  auto rows = detail::read_csv(is, {"index", "level", "coeff"});
  std::vector<double> coeffs;
  int level = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto index = detail::parse_size(rows[r][0]);
    const int lvl = static_cast<int>(detail::parse_size(rows[r][1]));
    if (index != r || lvl != basis.level_of(r)) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(r + 1) + " has inconsistent index/level");
    }
    coeffs.push_back(detail::parse_double(rows[r][2]));
    level = lvl;
  }
  // A trigonometric level is only complete after its cosine term.
  if (!coeffs.empty() && basis.dim(level) != coeffs.size()) {
    throw Error(ErrorCode::ParseError, "incomplete final level");
  }
  return CoefficientVector(basis, level, std::move(coeffs));
}

}  // namespace blindinv
