#include <fstream>
#include <map>
#include <sstream>

#include "blindinv/bench.hpp"
#include "blindinv/error.hpp"
#include "csv_util.hpp"

namespace blindinv {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(ErrorCode::ConfigError, key + " = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return detail::parse_double(value);
  } catch (const Error&) {
    bad(key, value, "not a number");
  }
}

long to_long(const std::string& key, const std::string& value) {
  const std::string t = detail::trim(value);
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(t, &pos);
  } catch (const std::exception&) {
    bad(key, value, "not an integer");
  }
  if (pos != t.size()) bad(key, value, "not an integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string t = detail::trim(value);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  bad(key, value, "expected a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (detail::trim(value).empty()) return out;
  for (const auto& part : detail::split(value, ',')) out.push_back(to_double(key, part));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

LepskiConfig& lepski_of(ExperimentConfig& cfg) {
  if (!cfg.lepski) cfg.lepski = LepskiConfig{};
  return *cfg.lepski;
}

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::Heat61: return "heat";
    case Preset::Deconv62: return "deconv";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

Preset parse_preset(const std::string& s) {
  if (s == "heat") return Preset::Heat61;
  if (s == "deconv") return Preset::Deconv62;
  if (s == "custom") return Preset::Custom;
  throw Error(ErrorCode::ConfigError, "unknown preset '" + s + "'");
}

ExperimentConfig ExperimentConfig::heat61() {
  ExperimentConfig c;
  c.preset = Preset::Heat61;
  c.model = ModelChoice::Heat;
  c.eps_grid = {1e-4, 1e-6, 1e-8};
  c.delta_grid = {1e-4, 1e-6, 1e-8};
  return c;
}

ExperimentConfig ExperimentConfig::deconv62() {
  ExperimentConfig c;
  c.preset = Preset::Deconv62;
  c.model = ModelChoice::Deconvolution;
  c.eps_grid = {1e-2, 1e-3};
  c.delta_grid = {1e-2, 1e-3};
  c.paired = true;
  LepskiConfig l;
  l.grid = LepskiGrid::Geometric;
  l.delta_tune = 1.0;
  l.s0 = 1.0;
  l.t_ill = 2.0;
  l.dim_d = 1;
  l.b = 2.0;
  l.exponent_override = 1.5;
  c.lepski = l;
  return c;
}

ModelChoice ExperimentConfig::pipeline() const {
  switch (preset) {
    case Preset::Heat61: return ModelChoice::Heat;
    case Preset::Deconv62: return ModelChoice::Deconvolution;
    case Preset::Custom: return model;
  }
  return model;
}

void ExperimentConfig::validate() const {
  if (eps_grid.empty() || delta_grid.empty()) throw Error(ErrorCode::ConfigError, "eps and delta grids must be non-empty");
  if (paired && eps_grid.size() != delta_grid.size()) {
    throw Error(ErrorCode::ConfigError, "paired grids must have equal length");
  }
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::ConfigError, "eps values must lie in (0, 1)");
  }
  for (double d : delta_grid) {
    if (!(d > 0.0)) throw Error(ErrorCode::ConfigError, "delta values must be positive");
  }
  if (n_mc < 1) throw Error(ErrorCode::ConfigError, "n_mc must be at least 1");
  if (!(tau_sq > 0.0) || !(sigma_theta_sq > 0.0)) throw Error(ErrorCode::ConfigError, "prior variances must be positive");
  if (!(heat_time > 0.0)) throw Error(ErrorCode::ConfigError, "heat_time must be positive");
  if (!(kernel_bandwidth > 0.0)) throw Error(ErrorCode::ConfigError, "kernel_h must be positive");
  if (prior_level && *prior_level < (pipeline() == ModelChoice::Heat ? 1 : 0)) {
    throw Error(ErrorCode::ConfigError, "prior_level out of range");
  }
  if (threads < 0) throw Error(ErrorCode::ConfigError, "threads must be non-negative");
  chain.validate();
  galerkin.validate();
  if (lepski) lepski->validate();
  if (pipeline() == ModelChoice::Deconvolution && !lepski && !prior_level) {
    throw Error(ErrorCode::ConfigError, "deconvolution needs Lepski selection or a fixed prior_level");
  }
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = detail::trim(raw_key);
  const std::string value = detail::trim(raw_value);
  if (key == "preset") {
    const Preset p = parse_preset(value);
    const auto out = output_dir;
    *this = p == Preset::Deconv62 ? deconv62() : heat61();
    preset = p;
    output_dir = out;
  } else if (key == "model") {
    if (value == "heat") model = ModelChoice::Heat;
    else if (value == "deconv") model = ModelChoice::Deconvolution;
    else bad(key, value, "expected heat or deconv");
  } else if (key == "eps") {
    eps_grid = to_list(key, value);
  } else if (key == "delta") {
    delta_grid = to_list(key, value);
  } else if (key == "paired") {
    paired = to_bool(key, value);
  } else if (key == "n_mc") {
    n_mc = static_cast<int>(to_long(key, value));
  } else if (key == "seed") {
    const long s = to_long(key, value);
    if (s < 0) bad(key, value, "seed must be non-negative");
    base_seed = static_cast<std::uint64_t>(s);
  } else if (key == "tau_sq") {
    tau_sq = to_double(key, value);
  } else if (key == "sigma_sq") {
    sigma_theta_sq = to_double(key, value);
  } else if (key == "burn_in") {
    chain.burn_in = static_cast<int>(to_long(key, value));
  } else if (key == "n_keep") {
    chain.n_keep = static_cast<int>(to_long(key, value));
  } else if (key == "thin") {
    chain.thin = static_cast<int>(to_long(key, value));
  } else if (key == "proposal_sd") {
    if (value == "auto") chain.proposal_sd.reset();
    else chain.proposal_sd = to_double(key, value);
  } else if (key == "adapt") {
    chain.adapt_proposal = to_bool(key, value);
  } else if (key == "heat_time") {
    heat_time = to_double(key, value);
  } else if (key == "theta0") {
    theta0 = to_double(key, value);
  } else if (key == "kernel_h") {
    kernel_bandwidth = to_double(key, value);
  } else if (key == "prior_level") {
    if (value == "auto") prior_level.reset();
    else prior_level = static_cast<int>(to_long(key, value));
  } else if (key == "lepski") {
    if (to_bool(key, value)) lepski_of(*this);
    else lepski.reset();
  } else if (key == "lepski_grid") {
    if (value == "dyadic") lepski_of(*this).grid = LepskiGrid::Dyadic;
    else if (value == "geometric") lepski_of(*this).grid = LepskiGrid::Geometric;
    else bad(key, value, "expected dyadic or geometric");
  } else if (key == "lepski_delta") {
    lepski_of(*this).delta_tune = to_double(key, value);
  } else if (key == "lepski_s0") {
    lepski_of(*this).s0 = to_double(key, value);
  } else if (key == "lepski_t") {
    lepski_of(*this).t_ill = to_double(key, value);
  } else if (key == "lepski_d") {
    lepski_of(*this).dim_d = static_cast<int>(to_long(key, value));
  } else if (key == "lepski_b") {
    lepski_of(*this).b = to_double(key, value);
  } else if (key == "lepski_exponent") {
    if (value == "auto") lepski_of(*this).exponent_override.reset();
    else lepski_of(*this).exponent_override = to_double(key, value);
  } else if (key == "galerkin_tau") {
    galerkin.tau = to_double(key, value);
  } else if (key == "threads") {
    threads = static_cast<int>(to_long(key, value));
  } else if (key == "noiseless") {
    noiseless = to_bool(key, value);
  } else if (key == "out") {
    output_dir = value;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown key '" + key + "'");
  }
}

void ExperimentConfig::load(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    entries.emplace_back(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  // The preset establishes defaults, so it is applied before everything else.
  for (const auto& [k, v] : entries) {
    if (k == "preset") set(k, v);
  }
  for (const auto& [k, v] : entries) {
    if (k != "preset") set(k, v);
  }
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  load(is);
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os << "preset = " << to_string(preset) << '\n'
     << "model = " << (model == ModelChoice::Heat ? "heat" : "deconv") << '\n'
     << "eps = " << join(eps_grid) << '\n'
     << "delta = " << join(delta_grid) << '\n'
     << "paired = " << (paired ? "true" : "false") << '\n'
     << "n_mc = " << n_mc << '\n'
     << "seed = " << base_seed << '\n'
     << "tau_sq = " << format_double(tau_sq) << '\n'
     << "sigma_sq = " << format_double(sigma_theta_sq) << '\n'
     << "burn_in = " << chain.burn_in << '\n'
     << "n_keep = " << chain.n_keep << '\n'
     << "thin = " << chain.thin << '\n'
     << "proposal_sd = " << (chain.proposal_sd ? format_double(*chain.proposal_sd) : "auto") << '\n'
     << "adapt = " << (chain.adapt_proposal ? "true" : "false") << '\n'
     << "heat_time = " << format_double(heat_time) << '\n'
     << "theta0 = " << format_double(theta0) << '\n'
     << "kernel_h = " << format_double(kernel_bandwidth) << '\n'
     << "prior_level = " << (prior_level ? std::to_string(*prior_level) : "auto") << '\n'
     << "lepski = " << (lepski ? "true" : "false") << '\n';
  if (lepski) {
    os << "lepski_grid = " << (lepski->grid == LepskiGrid::Dyadic ? "dyadic" : "geometric") << '\n'
       << "lepski_delta = " << format_double(lepski->delta_tune) << '\n'
       << "lepski_s0 = " << format_double(lepski->s0) << '\n'
       << "lepski_t = " << format_double(lepski->t_ill) << '\n'
       << "lepski_d = " << lepski->dim_d << '\n'
       << "lepski_b = " << format_double(lepski->b) << '\n'
       << "lepski_exponent = " << (lepski->exponent_override ? format_double(*lepski->exponent_override) : "auto")
       << '\n';
  }
  os << "galerkin_tau = " << format_double(galerkin.tau) << '\n'
     << "noiseless = " << (noiseless ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace blindinv
