#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

int load_and_run(const CommonOptions& options,
                 const std::function<int(const tbi::cli::RunConfig&)>& command) {
  nlohmann::json doc = nlohmann::json::object();
  try {
    if (!options.config_path.empty()) {
      std::ifstream in(options.config_path);
      if (!in) {
        throw tbi::cli::ConfigError("cannot open config file: " + options.config_path);
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      try {
        doc = nlohmann::json::parse(buffer.str());
      } catch (const nlohmann::json::parse_error& e) {
        throw tbi::cli::ConfigError(std::string("configuration is not well-formed JSON: ") +
                                    e.what());
      }
    }
    for (const auto& assignment : options.overrides) {
      tbi::cli::apply_override(doc, assignment);
    }
    return command(tbi::cli::parse_config(doc));
  } catch (const tbi::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "JSON run configuration file");
  cmd->add_option("--set", options.overrides,
                  "key=value override applied after the config file (dotted paths)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation probabilities, temporal Bell inequalities and "
               "measurement-resolution overlap for bistable two-state systems"};
  app.require_subcommand(1);

  CommonOptions options;
  int exit_code = 0;

  auto* overlap = app.add_subcommand(
      "overlap-curve", "overlap integral O(xi) for inequality types I and II");
  add_common(overlap, options);
  overlap->callback(
      [&] { exit_code = load_and_run(options, tbi::cli::cmd_overlap_curve); });

  auto* map = app.add_subcommand(
      "violation-map", "Delta P and effective uncertainties over the time grid");
  add_common(map, options);
  map->callback(
      [&] { exit_code = load_and_run(options, tbi::cli::cmd_violation_map); });

  auto* report = app.add_subcommand(
      "squid-report", "derived double-well and tunneling quantities for an rf-SQUID");
  add_common(report, options);
  report->callback(
      [&] { exit_code = load_and_run(options, tbi::cli::cmd_squid_report); });

  auto* pseudo = app.add_subcommand(
      "pseudo-map", "reconstructed three-time pseudo-probabilities over the time grid");
  add_common(pseudo, options);
  pseudo->callback(
      [&] { exit_code = load_and_run(options, tbi::cli::cmd_pseudo_map); });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
