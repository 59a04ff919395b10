#pragma once

#include <string>
#include <vector>

#include "prham/config.hpp"

namespace prham {

/// One named pass/fail check of a CLI command.
struct CommandCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool skipped = false;
};

CommandCheck make_check(std::string name, double value, double threshold);
CommandCheck make_skipped(std::string name);

/// norms.csv with the frozen header `step,k,norm,ratio`; ratio is the
/// H^k contraction ||beta_n|| / ||beta_{n-1}||^2.
void write_norms_csv(const std::string& path, const IterationReport& rep,
                     const std::vector<int>& ks);

/// Engine report with the frozen field names.
void write_engine_json(const std::string& path, const CliConfig& cfg,
                       const IterationReport& rep);

/// Report for validation-style commands: same metadata plus a check list and
/// optional named diagnostic values.
void write_checks_json(const std::string& path, const CliConfig& cfg,
                       const std::vector<CommandCheck>& checks, bool pass,
                       const std::vector<std::pair<std::string, double>>& diagnostics = {});

bool all_pass(const std::vector<CommandCheck>& checks);

}  // namespace prham
