// Command-line front end: window, orbit, adiabaticity, interfere, sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "planarspin/harness/commands.hpp"
#include "planarspin/harness/config.hpp"
#include "planarspin/harness/output.hpp"
#include "planarspin/version.hpp"

namespace ph = planarspin::harness;

int main(int argc, char** argv) {
  CLI::App app{"Berry phase of a planar spin around a current-carrying wire"};
  app.set_version_flag("--version", std::string(planarspin::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out_dir, format, mode;
  std::optional<unsigned> jobs;
  bool timings = false;
  bool print_config = false;

  app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config value, e.g. --set orbit.current='4000 A'");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--mode", mode, "analytic, propagated or both")->check(CLI::IsMember({"analytic", "propagated", "both"}));
  app.add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--timings", timings, "Append per-point runtimes to sweep records");
  app.add_flag("--print-config", print_config, "Print the canonical configuration and exit");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"window", "Current window and wire feasibility"},
      {"orbit", "Analytic and integrated classical orbits with conservation report"},
      {"adiabaticity", "Adiabaticity profile along the orbit and spin-following fidelity"},
      {"interfere", "Interferometer loop phase and detector intensities"},
      {"sweep", "Parameter sweep over v, b, current and wire offset"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ph::kExitOk : ph::kExitValidation;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  ph::RunConfig config;
  try {
    std::vector<std::string> all = overrides;
    if (out_dir) all.push_back("output.dir=" + *out_dir);
    if (format) all.push_back("output.format=" + *format);
    if (mode) all.push_back("output.mode=" + *mode);
    if (jobs) all.push_back("output.jobs=" + std::to_string(*jobs));
    if (timings) all.push_back("output.timings=true");
    config = config_path.empty() ? ph::parse_config("", all) : ph::load_config(config_path, all);
  } catch (const planarspin::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ph::exit_code_for(e.kind());
  }
  if (print_config) {
    std::cout << ph::to_yaml(config);
    return ph::kExitOk;
  }

  try {
    ph::CommandResult result;
    if (command == "window") result = ph::cmd_window(config);
    else if (command == "orbit") result = ph::cmd_orbit(config);
    else if (command == "adiabaticity") result = ph::cmd_adiabaticity(config);
    else if (command == "interfere") result = ph::cmd_interfere(config);
    else result = ph::cmd_sweep(config);
    std::cout << ph::dump(result.report);
    std::cerr << command << ": wrote " << result.outputs.size() + 1 << " files to " << config.output.dir
              << (result.exit_code == ph::kExitOk ? "" : " (gate failed)") << "\n";
    return result.exit_code;
  } catch (const planarspin::Error& e) {
    std::cerr << command << " failed [" << planarspin::to_string(e.kind()) << "]: " << e.what() << "\n";
    ph::write_failure_manifest(command, config, e);
    return ph::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << command << " failed: " << e.what() << "\n";
    return ph::kExitFailure;
  }
}
