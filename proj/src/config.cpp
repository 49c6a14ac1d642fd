#include "spde/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "spde/mesh.hpp"

namespace spde {
namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  // "a/b" fractions are handy for step sizes like 1/16.
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos)
      return std::stod(trim(text.substr(0, slash))) / std::stod(trim(text.substr(slash + 1)));
    return std::stod(text);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse real value '" + text + "'");
  }
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != trim(text).size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse integer '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("config key '" + key + "': cannot parse boolean '" + text + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<T>(parse(key, item)));
  }
  if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
  return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "T") cfg.T = parse_real(key, value);
  else if (key == "gamma") cfg.gamma = parse_real(key, value);
  else if (key == "spectrum") cfg.spectrum = value;
  else if (key == "datum") cfg.datum = value;
  else if (key == "variant") cfg.variant = value;
  else if (key == "drift") cfg.drift = value;
  else if (key == "M_list") cfg.M_list = parse_list<int>(key, value, parse_int);
  else if (key == "tau_list") cfg.tau_list = parse_list<double>(key, value, parse_real);
  else if (key == "reference_tau") cfg.reference_tau = parse_real(key, value);
  else if (key == "samples") cfg.samples = static_cast<int>(parse_int(key, value));
  else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "oversample") cfg.oversample = static_cast<int>(parse_int(key, value));
  else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, value));
  else if (key == "beta") cfg.beta = parse_real(key, value);
  else if (key == "standard_first_step") cfg.standard_first_step = parse_bool(key, value);
  else if (key == "allow_gamma_violation") cfg.allow_gamma_violation = parse_bool(key, value);
  else if (key == "out") cfg.out = value;
  else throw ValidationError("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path, std::vector<std::string>* keys_seen) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    apply_config_entry(cfg, key, trim(line.substr(eq + 1)));
    if (keys_seen) keys_seen->push_back(key);
  }
  return cfg;
}

NoiseSpectrum spectrum_from_config(const std::string& text) {
  if (text == "white") return NoiseSpectrum::white();
  if (text.rfind("power:", 0) == 0) {
    double delta = parse_real("spectrum", text.substr(6));
    if (!(delta >= 0.0 && delta <= 1.5))
      throw ValidationError("spectrum power exponent must lie in [0, 1.5], got " +
                            text.substr(6));
    return NoiseSpectrum::power(delta);
  }
  throw ValidationError("unknown spectrum '" + text + "' (expected white or power:<delta>)");
}

Variant variant_from_config(const std::string& text) {
  if (text == "collocation") return Variant::collocation;
  if (text == "galerkin") return Variant::galerkin;
  throw ValidationError("unknown variant '" + text + "' (expected collocation or galerkin)");
}

double resolve_beta(const ExperimentConfig& cfg, const NoiseSpectrum& q) {
  if (std::isfinite(cfg.beta)) return cfg.beta;
  return cfg.datum == "dirac" ? -0.51 : q.alpha();
}

int steps_from_tau(double tau, double T, double gamma) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("step size tau must lie in (0, 1]");
  if (!(T > 0.0) || !(gamma >= 0.0 && gamma < 1.0))
    throw ValidationError("steps_from_tau: need T > 0 and gamma in [0, 1)");
  double count = std::pow(T, 1.0 - gamma) / ((1.0 - gamma) * tau);
  return static_cast<int>(std::max<long long>(1, std::llround(count)));
}

double validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.T > 0.0)) throw ValidationError("config: T must be > 0");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw ValidationError("config: gamma must lie in [0, 1)");
  if (cfg.samples < 1) throw ValidationError("config: samples must be >= 1");
  if (cfg.oversample < 1) throw ValidationError("config: oversample must be >= 1");
  if (cfg.workers < 0) throw ValidationError("config: workers must be >= 0");
  if (cfg.M_list.empty()) throw ValidationError("config: M_list must not be empty");
  for (int M : cfg.M_list)
    if (M < 1) throw ValidationError("config: mode counts must be >= 1");
  if (cfg.tau_list.empty()) throw ValidationError("config: tau_list must not be empty");
  for (double tau : cfg.tau_list) steps_from_tau(tau, cfg.T, cfg.gamma);
  steps_from_tau(cfg.reference_tau, cfg.T, cfg.gamma);
  for (std::size_t i = 0; i + 1 < cfg.M_list.size(); ++i)
    if (cfg.M_list[i + 1] != 2 * cfg.M_list[i])
      throw ValidationError("config: M_list must be a doubling chain (each entry twice the last)");
  for (std::size_t i = 0; i + 1 < cfg.tau_list.size(); ++i)
    if (std::abs(cfg.tau_list[i] / cfg.tau_list[i + 1] - 2.0) > 1e-9)
      throw ValidationError("config: tau_list must be a halving chain (each entry half the last)");
  NoiseSpectrum q = spectrum_from_config(cfg.spectrum);
  InitialDatum::by_name(cfg.datum);
  variant_from_config(cfg.variant);
  drift_registry(cfg.drift);
  double beta = resolve_beta(cfg, q);
  double bound = gamma_lower_bound(q.alpha(), beta);
  if (cfg.gamma <= bound && !cfg.allow_gamma_violation)
    throw ValidationError("config: grading exponent gamma = " + std::to_string(cfg.gamma) +
                          " must exceed max(1/2, 1-(1+beta)/alpha) = " + std::to_string(bound) +
                          " (set allow_gamma_violation to run anyway)");
  return bound;
}

int resolve_workers(const ExperimentConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

std::uint64_t resolve_master_seed(std::optional<std::uint64_t> cli,
                                  std::optional<std::uint64_t> config_file) {
  if (cli) return *cli;
  if (config_file) return *config_file;
  if (const char* env = std::getenv("SPDE_SEED")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw ValidationError("SPDE_SEED environment variable is not an unsigned integer");
  }
  return ExperimentConfig{}.master_seed;
}

}  // namespace spde
