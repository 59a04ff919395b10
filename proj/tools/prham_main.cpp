#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "prham/commands.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

prham::CliConfig load_config(const GlobalArgs& args, const std::string& default_scenario) {
  prham::CliConfig cfg;
  if (!args.config_path.empty()) {
    cfg = prham::parse_config_file(args.config_path);
  } else {
    cfg.scenario = default_scenario;
    if (default_scenario == "b-torus" || default_scenario == "torus-abelian")
      cfg.truncation = 16;
  }
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity toolkit for infinitesimal momentum maps on T^2 and S^2"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "configuration file (key = value sections)");
  app.add_option("--out", args.out_dir, "output directory for report.json / norms.csv");
  app.add_option("--seed", args.seed, "override the scenario seed");

  std::string defaults;
  auto* btorus = app.add_subcommand("validate-btorus", "pointwise b-torus anchor identity");
  auto* selftest = app.add_subcommand("complex-selftest", "cochain complex invariants");
  auto* rigidity = app.add_subcommand("rigidity", "newton rigidity run");
  auto* quad = app.add_subcommand("estimate-quadratic", "quadratic defect scaling");
  auto* sci = app.add_subcommand("sci-demo", "generic normal-form driver demo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::filesystem::create_directories(args.out_dir);
    if (btorus->parsed()) {
      auto cfg = load_config(args, "b-torus");
      return prham::cmd_validate_btorus(cfg, args.out_dir);
    }
    if (selftest->parsed()) {
      auto cfg = load_config(args, "sphere-so3");
      if (args.config_path.empty()) cfg.truncation = 8;
      return prham::cmd_complex_selftest(cfg, args.out_dir);
    }
    if (rigidity->parsed()) {
      auto cfg = load_config(args, "sphere-so3");
      return prham::cmd_rigidity(cfg, args.out_dir);
    }
    if (quad->parsed()) {
      auto cfg = load_config(args, "sphere-so3");
      return prham::cmd_estimate_quadratic(cfg, args.out_dir);
    }
    if (sci->parsed()) {
      auto cfg = load_config(args, "sphere-so3");
      if (args.config_path.empty()) cfg.truncation = 8;
      return prham::cmd_sci_demo(cfg, args.out_dir);
    }
  } catch (const prham::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
