#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "planarspin/harness/config.hpp"
#include "planarspin/harness/output.hpp"

namespace planarspin::harness {

struct SweepPoint {
  double v = 0.0;
  double b = 0.0;
  double current = 0.0;
  std::int64_t geometry_id = 0;  // index into sweep.wire_offset_y
  double wire_offset_y = 0.0;

  auto operator<=>(const SweepPoint&) const = default;
};

struct SweepRecord {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  SweepPoint input;
  double eccentricity = kUnset;
  double adiabaticity_max = kUnset;      // along the orbit, at periapsis
  double arm_adiabaticity_max = kUnset;  // along the interferometer arms
  double fidelity = kUnset;              // final |<+|psi>|^2 after the orbit pass
  double loop_phase = kUnset;
  double dynamical_mismatch = kUnset;
  double d1_analytic = kUnset, d2_analytic = kUnset;
  double d1_propagated = kUnset, d2_propagated = kUnset;
  double runtime = 0.0;  // seconds, reported only on request
  std::string error;     // ErrorKind name, empty on success
  std::string message;
};

/// Cartesian product v x b x current x wire_offset_y in canonical (sorted) order.
/// Throws Error(kValidation) for empty or oversized grids.
std::vector<SweepPoint> expand_grid(const RunConfig& config);

/// Never throws for physics failures; they are recorded in `error`.
SweepRecord evaluate_point(const SweepPoint& point, const RunConfig& config, ModeSelection mode);

/// Evaluates every grid point on up to `jobs` worker threads; records come back sorted by input.
std::vector<SweepRecord> run_sweep(const RunConfig& config, ModeSelection mode, unsigned jobs);

/// Fixed column layout; the runtime column is appended only when `timings` is set.
Table sweep_table(const std::vector<SweepRecord>& records, bool timings);

}  // namespace planarspin::harness
