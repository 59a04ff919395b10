#include "prham/config.hpp"

#include <fstream>
#include <sstream>

namespace prham {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool to_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config: bad on/off value for " + key + ": '" + v + "'");
}

void check_positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError("config: " + key + " must be finite and positive");
}

}  // namespace

std::string CliConfig::backend_name() const {
  if (scenario == "sphere-so3" || scenario == "sphere-so3-classical") return "sphere2";
  return "torus2";
}

CliConfig parse_config_text(const std::string& text) {
  CliConfig cfg;
  std::istringstream is(text);
  std::string line, section = "scenario";
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config: malformed section at line " +
                                                std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "engine" && section != "complex" &&
          section != "btorus")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;

    if (full == "scenario.name") {
      if (value != "sphere-so3" && value != "sphere-so3-classical" && value != "torus-abelian" &&
          value != "b-torus")
        throw ConfigError("config: unknown scenario '" + value + "'");
      cfg.scenario = value;
    } else if (full == "scenario.truncation") {
      cfg.truncation = int(to_int(full, value));
      if (cfg.truncation < 1) throw ConfigError("config: truncation must be >= 1");
    } else if (full == "scenario.padding") {
      cfg.padding = int(to_int(full, value));
      if (cfg.padding < 1) throw ConfigError("config: padding must be >= 1");
    } else if (full == "scenario.epsilon") {
      cfg.epsilon = to_double(full, value);
      if (!std::isfinite(cfg.epsilon)) throw ConfigError("config: epsilon must be finite");
    } else if (full == "scenario.seed") {
      cfg.seed = std::uint64_t(to_int(full, value));
    } else if (full == "engine.tol") {
      cfg.engine.tol = to_double(full, value);
      check_positive(full, cfg.engine.tol);
    } else if (full == "engine.max_steps") {
      cfg.engine.max_steps = int(to_int(full, value));
      if (cfg.engine.max_steps < 0) throw ConfigError("config: max_steps must be >= 0");
    } else if (full == "engine.steps_per_unit") {
      cfg.engine.steps_per_unit = int(to_int(full, value));
      if (cfg.engine.steps_per_unit < 1) throw ConfigError("config: steps_per_unit must be >= 1");
    } else if (full == "engine.smoothing") {
      cfg.engine.smoothing = to_switch(full, value);
    } else if (full == "engine.smoothing_t0") {
      cfg.engine.smoothing_t0 = to_double(full, value);
      check_positive(full, cfg.engine.smoothing_t0);
    } else if (full == "engine.validate_tol") {
      cfg.engine.validate_tol = to_double(full, value);
      check_positive(full, cfg.engine.validate_tol);
    } else if (full == "engine.max_near_norm") {
      cfg.engine.max_near_norm = to_double(full, value);
      check_positive(full, cfg.engine.max_near_norm);
    } else if (full == "engine.max_far_norm") {
      cfg.engine.max_far_norm = to_double(full, value);
      check_positive(full, cfg.engine.max_far_norm);
    } else if (full == "engine.diverge_factor") {
      cfg.engine.diverge_factor = to_double(full, value);
      check_positive(full, cfg.engine.diverge_factor);
    } else if (full == "engine.homotopy_reference") {
      if (value == "reference")
        cfg.engine.freeze_at_reference = true;
      else if (value == "moving")
        cfg.engine.freeze_at_reference = false;
      else
        throw ConfigError("config: homotopy_reference must be 'reference' or 'moving'");
    } else if (full == "engine.morphism_tol") {
      cfg.morphism_tol = to_double(full, value);
      check_positive(full, cfg.morphism_tol);
    } else if (full == "complex.svd_cutoff") {
      cfg.svd_cutoff = to_double(full, value);
      check_positive(full, cfg.svd_cutoff);
    } else if (full == "complex.export_matrices") {
      cfg.export_matrices = to_switch(full, value);
    } else if (full == "complex.selftest_samples") {
      cfg.selftest_samples = int(to_int(full, value));
      if (cfg.selftest_samples < 1) throw ConfigError("config: selftest_samples must be >= 1");
    } else if (full == "btorus.eta") {
      cfg.eta = to_double(full, value);
      check_positive(full, cfg.eta);
    } else if (full == "btorus.tamper") {
      if (value != "none" && value != "cos")
        throw ConfigError("config: tamper must be 'none' or 'cos'");
      cfg.tamper = value;
    } else {
      throw ConfigError("config: unknown key '" + full + "'");
    }
  }
  return cfg;
}

CliConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace prham
