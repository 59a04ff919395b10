#pragma once

#include "prham/report.hpp"

namespace prham {

// CLI subcommands.  Each writes its reports under out_dir and returns the
// process exit code: 0 pass, 1 numerical failure (config errors are raised
// as ConfigError and mapped to exit 2 by the entry point).
int cmd_validate_btorus(const CliConfig& cfg, const std::string& out_dir);
int cmd_complex_selftest(const CliConfig& cfg, const std::string& out_dir);
int cmd_rigidity(const CliConfig& cfg, const std::string& out_dir);
int cmd_estimate_quadratic(const CliConfig& cfg, const std::string& out_dir);
int cmd_sci_demo(const CliConfig& cfg, const std::string& out_dir);

}  // namespace prham
