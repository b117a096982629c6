#include "blindinv/forward.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "blindinv/error.hpp"
#include "blindinv/prior.hpp"
#include "csv_util.hpp"

namespace blindinv {

Observation simulate(const OperatorModel& model, const CoefficientVector& f0, const ThetaParam& theta0, double eps,
                     double delta, int n_sim, Rng& rng, SimulationOptions options) {
  if (!(f0.basis() == model.basis)) throw Error(ErrorCode::ModelMismatch, "f0 basis differs from the operator basis");
  if (n_sim < f0.level()) {
    throw Error(ErrorCode::LevelMismatch, "simulation level " + std::to_string(n_sim) + " below f0 level " +
                                              std::to_string(f0.level()));
  }
  if (!(eps > 0.0) || !(delta > 0.0)) throw Error(ErrorCode::ConfigError, "noise levels must be positive");
  if (!theta0.is_scalar() && theta0.size() < model.basis.level_count(n_sim)) {
    throw Error(ErrorCode::LevelMismatch, "theta0 does not cover the simulation level");
  }

  const double noise_y = options.noiseless ? 0.0 : eps;
  const double noise_t = options.noiseless ? 0.0 : delta;
  const ThetaParam theta_sim = project_theta(theta0, model.basis, n_sim);

  CoefficientVector y = apply(model, theta_sim, resize_to_level(f0, n_sim));
  for (double& c : y.coeffs()) c += noise_y * rng.normal();

  ThetaParam t = theta_sim;
  for (double& v : t.values()) v += noise_t * rng.normal();

  Observation obs{std::move(y), std::move(t), eps, delta, rng.seed(), model, options.noiseless};
  return obs;
}

namespace {

void check_levels(const Observation& obs, const CoefficientVector& f, int level) {
  if (f.level() > level || level > obs.y.level()) {
    throw Error(ErrorCode::LevelMismatch, "need f.level <= j <= y.level (f.level=" + std::to_string(f.level()) +
                                              ", j=" + std::to_string(level) +
                                              ", y.level=" + std::to_string(obs.y.level()) + ")");
  }
}

}  // namespace

std::vector<double> log_likelihood_terms(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta,
                                         int level) {
  check_levels(obs, f, level);
  const double eps2 = obs.effective_eps() * obs.effective_eps();
  const double delta2 = obs.effective_delta() * obs.effective_delta();
  if (eps2 == 0.0 || delta2 == 0.0) {
    throw Error(ErrorCode::Unsupported, "projected likelihood is degenerate for noiseless observations");
  }
  const CoefficientVector kf = apply(obs.model, theta, f);
  std::vector<double> terms;
  terms.reserve(kf.size() + theta.size());
  for (std::size_t i = 0; i < kf.size(); ++i) {
    terms.push_back(kf[i] * obs.y[i] / eps2 - kf[i] * kf[i] / (2.0 * eps2));
  }
  const ThetaParam pt = project_theta(theta, obs.model.basis, level);
  if (!pt.is_scalar() && pt.size() > obs.t.size()) throw Error(ErrorCode::LevelMismatch, "T does not cover level j");
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const double th = pt.values()[i];
    terms.push_back(th * obs.t.values()[i] / delta2 - th * th / (2.0 * delta2));
  }
  return terms;
}

double log_likelihood_projected(const Observation& obs, const CoefficientVector& f, const ThetaParam& theta,
                                int level) {
  double s = 0.0;
  for (double term : log_likelihood_terms(obs, f, theta, level)) s += term;
  return s;
}

PriorConfig PriorConfig::constant(int level, double tau_sq, double sigma_theta_sq) {
  PriorConfig p;
  p.level = level;
  p.tau_sq = {tau_sq};
  p.sigma_theta_sq = sigma_theta_sq;
  p.validate();
  return p;
}

double PriorConfig::tau_sq_at(int lvl) const {
  if (tau_sq.size() == 1) return tau_sq.front();
  if (lvl < 0 || static_cast<std::size_t>(lvl) >= tau_sq.size()) {
    throw Error(ErrorCode::LevelMismatch, "prior variance missing for level " + std::to_string(lvl));
  }
  return tau_sq[static_cast<std::size_t>(lvl)];
}

void PriorConfig::validate() const {
  if (level < 0) throw Error(ErrorCode::ConfigError, "prior level must be non-negative");
  if (tau_sq.empty() || (tau_sq.size() != 1 && tau_sq.size() != static_cast<std::size_t>(level) + 1)) {
    throw Error(ErrorCode::ConfigError, "tau_sq must hold one value or one per level 0..J");
  }
  for (double v : tau_sq) {
    if (!(v > 0.0)) throw Error(ErrorCode::ConfigError, "prior variances must be positive");
  }
  if (!(sigma_theta_sq > 0.0)) throw Error(ErrorCode::ConfigError, "theta prior variance must be positive");
}

double log_prior_theta(const ThetaParam& theta, const PriorConfig& prior) {
  double s = 0.0;
  for (double v : theta.values()) s -= v * v / (2.0 * prior.sigma_theta_sq);
  return s;
}

double log_prior_f(const CoefficientVector& f, const PriorConfig& prior) {
  if (f.level() > prior.level) throw Error(ErrorCode::LevelMismatch, "f lies outside the prior support V_J");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s -= f[i] * f[i] / (2.0 * prior.tau_sq_at(f.level_of(i)));
  return s;
}

// ---------------------------------------------------------------------------
// Observation files

namespace {

void write_meta(std::ostream& os, const Observation& obs) {
  os << "# eps=" << format_double(obs.eps) << '\n'
     << "# delta=" << format_double(obs.delta) << '\n'
     << "# seed=" << obs.seed << '\n'
     << "# model=" << (obs.model.kind == OperatorKind::Heat ? "heat" : "svd_diagonal") << '\n'
     << "# t_time=" << format_double(obs.model.t_time) << '\n'
     << "# basis=" << to_string(obs.model.basis.kind) << '\n'
     << "# noiseless=" << (obs.noiseless ? 1 : 0) << '\n'
     << "# theta=" << (obs.t.is_scalar() ? "scalar" : "sequence") << '\n';
}

std::map<std::string, std::string> read_meta(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  while (is.peek() == '#' && std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    meta[detail::trim(line.substr(1, eq - 1))] = detail::trim(line.substr(eq + 1));
  }
  return meta;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  return is;
}

}  // namespace

void write_observation(const Observation& obs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto os = open_out(dir / "y.csv");
    write_meta(os, obs);
    write_coefficients_csv(os, obs.y);
  }
  auto os = open_out(dir / "t.csv");
  write_meta(os, obs);
  os << "slot,level,value\n";
  for (std::size_t i = 0; i < obs.t.size(); ++i) {
    const int level = obs.t.is_scalar() ? 0 : obs.model.basis.first_level() + static_cast<int>(i);
    os << i << ',' << level << ',' << format_double(obs.t.values()[i]) << '\n';
  }
}

Observation read_observation(const std::filesystem::path& dir) {
  auto ys = open_in(dir / "y.csv");
  const auto meta = read_meta(ys);
  auto get = [&](const std::string& key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw Error(ErrorCode::ParseError, "y.csv metadata lacks '" + key + "'");
    return it->second;
  };
  Observation obs;
  obs.eps = detail::parse_double(get("eps"));
  obs.delta = detail::parse_double(get("delta"));
  obs.seed = detail::parse_size(get("seed"));
  obs.noiseless = get("noiseless") == "1";
  const BasisSpec basis = get("basis") == "sine" ? BasisSpec::sine() : BasisSpec::trigonometric();
  obs.model = get("model") == "heat" ? OperatorModel::heat(detail::parse_double(get("t_time")))
                                     : OperatorModel::svd_diagonal(basis);
  obs.y = read_coefficients_csv(ys, basis);

  auto ts = open_in(dir / "t.csv");
  const auto tmeta = read_meta(ts);
  std::vector<double> values;
  for (const auto& row : detail::read_csv(ts, {"slot", "level", "value"})) values.push_back(detail::parse_double(row[2]));
  const auto kind = tmeta.find("theta");
  if (kind != tmeta.end() && kind->second == "scalar") {
    if (values.size() != 1) throw Error(ErrorCode::ParseError, "scalar theta needs exactly one row");
    obs.t = ThetaParam::scalar(values.front());
  } else {
    obs.t = ThetaParam::sequence(std::move(values));
  }
  return obs;
}

}  // namespace blindinv
