#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "planarspin/error.hpp"
#include "planarspin/harness/config.hpp"
#include "planarspin/interferometer.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/spin.hpp"
#include "planarspin/transport.hpp"

namespace planarspin::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitPhysicsGate = 3,
  kExitGeometry = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

DensityMatrix initial_density(InitialSpin spin);
SpinStepControl spin_control(const RunConfig& config);
OrbitTolerances orbit_tolerances(const RunConfig& config);
OrbitParams orbit_params(const RunConfig& config);

/// Each command writes its tables, <command>_report.json and manifest.json into
/// config.output.dir. Errors that stop a command propagate as planarspin::Error.
CommandResult cmd_window(const RunConfig& config);
CommandResult cmd_orbit(const RunConfig& config);
CommandResult cmd_adiabaticity(const RunConfig& config);
CommandResult cmd_interfere(const RunConfig& config);
CommandResult cmd_sweep(const RunConfig& config);

/// Writes manifest.json for a run that ended with an error.
void write_failure_manifest(const std::string& command, const RunConfig& config, const Error& error);

}  // namespace planarspin::harness
