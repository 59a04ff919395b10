#pragma once

#include <string>

#include "prham/engine.hpp"

namespace prham {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key = value configuration with sections per module; unknown keys or
/// sections are rejected.
struct CliConfig {
  // [scenario]
  std::string scenario = "sphere-so3";
  int truncation = 12;
  int padding = 2;
  double epsilon = 1e-2;
  std::uint64_t seed = 7;

  // [engine]
  EngineConfig engine;
  double morphism_tol = 1e-5;

  // [complex]
  double svd_cutoff = 1e-10;
  int selftest_samples = 200;
  bool export_matrices = false;

  // [btorus]
  double eta = 0.1;
  std::string tamper = "none";  // none | cos

  std::string backend_name() const;
};

CliConfig parse_config_file(const std::string& path);
CliConfig parse_config_text(const std::string& text);

}  // namespace prham
