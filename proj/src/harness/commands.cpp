#include "planarspin/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "planarspin/harness/output.hpp"
#include "planarspin/harness/sweep.hpp"
#include "planarspin/path.hpp"

namespace planarspin::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_dir(const RunConfig& config) {
  const fs::path dir(config.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kValidation, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void finish(const std::string& command, const RunConfig& config, CommandResult& result, const json& gates) {
  const fs::path dir = prepare_dir(config);
  write_text(dir / (command + "_report.json"), dump(result.report));
  result.outputs.push_back(command + "_report.json");
  write_text(dir / "manifest.json", dump(make_manifest(command, config, gates, result.outputs, result.exit_code)));
}

json vec(Vec2 v) { return json::array({number(v.x), number(v.y)}); }

json complex_json(Complex z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

json mat_json(const Mat2& m) {
  return json::array({json::array({complex_json(m.m00), complex_json(m.m01)}),
                      json::array({complex_json(m.m10), complex_json(m.m11)})});
}

json budget_json(const ArmPhaseBudget& b) {
  return {{"geometric", number(b.geometric)},
          {"dynamical_plus", number(b.dynamical[0])},
          {"dynamical_minus", number(b.dynamical[1])},
          {"transit_time", number(b.transit_time)},
          {"length", number(b.length)}};
}

std::string_view mode_name(ExperimentMode m) { return m == ExperimentMode::kAnalytic ? "analytic" : "propagated"; }

std::vector<ExperimentMode> modes(ModeSelection sel) {
  switch (sel) {
    case ModeSelection::kAnalytic: return {ExperimentMode::kAnalytic};
    case ModeSelection::kPropagated: return {ExperimentMode::kPropagated};
    case ModeSelection::kBoth: break;
  }
  return {ExperimentMode::kAnalytic, ExperimentMode::kPropagated};
}

Table trajectory_table(const Trajectory& traj, bool with_deviation) {
  Table t;
  t.columns = {"t_s", "x_m", "y_m", "r_m", "theta_rad", "vx_m_per_s", "vy_m_per_s", "energy_J", "ang_mom_J_s"};
  if (with_deviation) {
    t.columns.push_back("deviation_x_m");
    t.columns.push_back("deviation_y_m");
  }
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    std::vector<Cell> row{s.t, s.state.x, s.state.y, s.state.r, s.state.theta, s.state.vx, s.state.vy, s.energy,
                          s.ang_mom};
    if (with_deviation) {
      const Vec2 d = i < traj.deviations.size() ? traj.deviations[i] : Vec2{};
      row.emplace_back(d.x);
      row.emplace_back(d.y);
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kRange:
      return kExitValidation;
    case ErrorKind::kTolerance:
    case ErrorKind::kStepFailure:
    case ErrorKind::kNonUnitary:
    case ErrorKind::kEmptyWindow:
      return kExitPhysicsGate;
    case ErrorKind::kGeometry:
    case ErrorKind::kSingularity:
    case ErrorKind::kWireCollision:
    case ErrorKind::kOpenPath:
      return kExitGeometry;
  }
  return kExitFailure;
}

DensityMatrix initial_density(InitialSpin spin) {
  switch (spin) {
    case InitialSpin::kUnpolarized: return DensityMatrix::unpolarized();
    case InitialSpin::kUp: return DensityMatrix::pure({1.0, 0.0});
    case InitialSpin::kDown: return DensityMatrix::pure({0.0, 1.0});
    // Eigenstates of sigma_theta at the entrance point P, which sits at theta = pi seen from the wire.
    case InitialSpin::kPlus: return DensityMatrix::pure(local_eigenframe(kPi).plus);
    case InitialSpin::kMinus: return DensityMatrix::pure(local_eigenframe(kPi).minus);
  }
  return DensityMatrix::unpolarized();
}

SpinStepControl spin_control(const RunConfig& config) {
  SpinStepControl c;
  c.tolerance = config.tolerances.spin;
  c.unitarity_tolerance = config.tolerances.unitarity;
  c.wire_radius = config.geometry.wire_radius;
  return c;
}

OrbitTolerances orbit_tolerances(const RunConfig& config) {
  OrbitTolerances t;
  t.relative = config.tolerances.orbit_relative;
  t.conservation = config.tolerances.conservation;
  return t;
}

OrbitParams orbit_params(const RunConfig& config) {
  OrbitParams p{config.orbit.v,        config.orbit.b,        config.orbit.current,       config.orbit.branch,
                config.orbit.launch,   config.orbit.upstream, config.geometry.wire_radius};
  p.validate();
  return p;
}

CommandResult cmd_window(const RunConfig& config) {
  config.validate();
  const auto& c = config.constants;
  const double v = config.orbit.v, b = config.orbit.b, margin = config.window.margin;
  CommandResult result;
  CurrentWindow w{c.hbar * v / (4.0 * c.c0()), c.m_n * v * v * b / c.c0()};
  std::string diagnostic;
  try {
    w = current_window(v, b, c, margin);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptyWindow) throw;
    diagnostic = e.what();
    result.exit_code = kExitPhysicsGate;
  }
  const double feasible = wire_feasibility(config.wire.current_density_limit, config.geometry.wire_radius);
  const double lo = w.low * margin, hi = w.high / margin;
  auto& r = result.report;
  r["v"] = number(v);
  r["b"] = number(b);
  r["c0"] = number(c.c0());
  r["I_low"] = number(w.low);
  r["I_high"] = number(w.high);
  r["ratio"] = number(w.ratio());
  r["margin"] = number(margin);
  r["window_pass"] = diagnostic.empty();
  r["crossover_b"] = number(margin * margin * c.hbar / (4.0 * c.m_n * v));
  r["diagnostic"] = diagnostic;
  r["wire"] = {{"current_density_limit", number(config.wire.current_density_limit)},
               {"radius", number(config.geometry.wire_radius)},
               {"feasible_current", number(feasible)},
               {"feasible_inside_window", diagnostic.empty() && feasible > lo && feasible < hi}};
  r["nominal_current"] = {{"current", number(config.orbit.current)},
                          {"inside_window", diagnostic.empty() && config.orbit.current > lo &&
                                                config.orbit.current < hi},
                          {"adiabatic_ratio", number(config.orbit.current / w.low)},
                          {"straightness_ratio", number(w.high / config.orbit.current)}};
  finish("window", config, result, {{"window", diagnostic.empty()}});
  return result;
}

CommandResult cmd_orbit(const RunConfig& config) {
  config.validate();
  const auto& c = config.constants;
  const OrbitParams params = orbit_params(config);
  const fs::path dir = prepare_dir(config);
  CommandResult result;
  auto& r = result.report;
  r["eccentricity"] = number(eccentricity(params, c));

  // The analytic window is checked first so a range error surfaces before any integration.
  std::optional<ConicOrbit> conic;
  std::vector<double> requested;
  if (params.current > 0) {
    conic = conic_orbit(params, c);
    if (config.orbit.theta_range) {
      requested = lin_space(config.orbit.theta_range->first, config.orbit.theta_range->second, config.orbit.samples);
      for (double th : requested) (void)conic->radius(th);
    }
  } else if (config.orbit.theta_range) {
    throw Error(ErrorKind::kRange, "orbit.theta_range needs a nonzero current (no conic at I = 0)");
  }

  const Trajectory traj = integrate_orbit(params, c, 0.0, orbit_tolerances(config));
  const double drift_e = traj.max_energy_drift();
  const double drift_l = traj.max_angular_momentum_drift();
  const bool conserved = drift_e < config.tolerances.conservation && drift_l < config.tolerances.conservation;
  r["integrated"] = {{"samples", traj.samples.size()},
                     {"energy_drift", number(drift_e)},
                     {"angular_momentum_drift", number(drift_l)},
                     {"duration", number(traj.samples.back().t - traj.samples.front().t)},
                     {"theta_start", number(traj.samples.front().state.theta)},
                     {"theta_end", number(traj.samples.back().state.theta)}};
  const double x0 = traj.samples.front().state.x;
  r["integrated"]["max_transverse_deviation"] = number(max_transverse_deviation(traj, x0, -x0));
  result.outputs = write_table(dir, "orbit_integrated", trajectory_table(traj, true), config.output.format);

  if (conic) {
    if (requested.empty())
      requested = lin_space(traj.samples.front().state.theta, traj.samples.back().state.theta, config.orbit.samples);
    const Trajectory analytic = analytic_orbit(*conic, params.branch, params.current, requested);
    double worst = 0.0;
    for (const auto& s : traj.samples)
      worst = std::max(worst, std::abs(conic->radius(s.state.theta) - s.state.r) / s.state.r);
    const auto [in, out] = conic->asymptotes();
    r["analytic"] = {{"semi_latus_rectum", number(conic->semi_latus_rectum())},
                     {"eccentricity", number(conic->eccentricity())},
                     {"periapsis", number(conic->periapsis())},
                     {"axis", number(conic->axis())},
                     {"asymptote_in", number(in)},
                     {"asymptote_out", number(out)},
                     {"samples", analytic.samples.size()},
                     {"max_relative_radius_difference", number(worst)}};
    auto files = write_table(dir, "orbit_analytic", trajectory_table(analytic, false), config.output.format);
    result.outputs.insert(result.outputs.end(), files.begin(), files.end());
  } else {
    r["analytic"] = nullptr;
  }

  if (!conserved) result.exit_code = kExitPhysicsGate;
  r["conservation_pass"] = conserved;
  finish("orbit", config, result, {{"conservation", conserved}});
  return result;
}

CommandResult cmd_adiabaticity(const RunConfig& config) {
  config.validate();
  const auto& c = config.constants;
  const OrbitParams params = orbit_params(config);
  if (!(params.current > 0)) throw Error(ErrorKind::kValidation, "adiabaticity needs orbit.current > 0");
  const fs::path dir = prepare_dir(config);
  CommandResult result;
  auto& r = result.report;

  const Trajectory traj = integrate_orbit(params, c, 0.0, orbit_tolerances(config));
  const auto profile = adiabatic_profile(traj, params.current, c);
  Table t;
  t.columns = {"t_s", "x_m", "y_m", "r_m", "v_theta_m_per_s", "adiabaticity"};
  std::size_t peak = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& s = traj.samples[i].state;
    t.add_row({profile[i].t, s.x, s.y, s.r, s.v_theta(), profile[i].value});
    if (profile[i].value > profile[peak].value) peak = i;
  }
  result.outputs = write_table(dir, "adiabaticity_profile", t, config.output.format);

  const auto check = matrix_element_check(traj.samples[peak].state, params.current, c);
  const double low = c.hbar * params.v / (4.0 * c.c0());
  r["peak"] = {{"value", number(profile[peak].value)},
               {"t", number(profile[peak].t)},
               {"r", number(traj.samples[peak].state.r)},
               {"closed_form_upper_bound", number(c.hbar * params.v / (4.0 * c.c0() * params.current))}};
  r["I_low"] = number(low);
  r["current_over_I_low"] = number(params.current / low);
  r["matrix_element_check"] = {{"closed_form", complex_json(check.closed_form)},
                               {"numeric", complex_json(check.numeric)},
                               {"relative_difference", number(check.relative_difference)},
                               {"quotient", number(check.adiabatic_quotient)}};
  json gates = {{"matrix_element", check.relative_difference < 1e-10}};

  if (config.output.mode != ModeSelection::kAnalytic) {
    const auto spin = propagate_spin(traj, local_eigenframe(traj.samples.front().state).plus, params.current, c,
                                     spin_control(config));
    const auto& branch = spin.branches[branch_index(SpinBranch::kPlus)];
    r["propagated"] = {{"final_fidelity", number(branch.final_fidelity)},
                       {"min_fidelity", number(*std::min_element(branch.fidelity.begin(), branch.fidelity.end()))},
                       {"dynamical_phase", number(branch.dynamical_phase)},
                       {"geometric_phase", number(branch.geometric_phase)},
                       {"swept_half_angle", number(-0.5 * (traj.samples.back().state.theta -
                                                           traj.samples.front().state.theta))},
                       {"max_norm_error", number(spin.max_norm_error)},
                       {"steps", spin.steps}};
    gates["unitarity"] = spin.max_norm_error < config.tolerances.unitarity;
    Table h;
    h.columns = {"t_s", "fidelity"};
    for (std::size_t i = 0; i < spin.times.size(); ++i) h.add_row({spin.times[i], branch.fidelity[i]});
    auto files = write_table(dir, "adiabaticity_fidelity", h, config.output.format);
    result.outputs.insert(result.outputs.end(), files.begin(), files.end());
  }
  for (const auto& [k, v] : gates.items())
    if (!v.get<bool>()) result.exit_code = kExitPhysicsGate;
  finish("adiabaticity", config, result, gates);
  return result;
}

CommandResult cmd_interfere(const RunConfig& config) {
  config.validate();
  const auto& c = config.constants;
  const auto& g = config.geometry;
  const double v = config.orbit.v, current = config.orbit.current;
  if (!(current > 0)) throw Error(ErrorKind::kValidation, "interfere needs orbit.current > 0");
  const fs::path dir = prepare_dir(config);
  CommandResult result;
  auto& r = result.report;

  const auto geometry = build_geometry(g.arm_half_length, g.arm_height, g.wire_offset, g.wire_radius);
  const auto loop = loop_unitary(geometry, current, v, c);
  r["geometry"] = {{"p", vec(geometry.p)},
                   {"q", vec(geometry.q)},
                   {"mirror_up", vec(geometry.mirror_up)},
                   {"mirror_down", vec(geometry.mirror_down)},
                   {"wire", vec(geometry.wire_position)},
                   {"symmetric", geometry.symmetric()},
                   {"winding", loop.winding}};
  r["loop"] = {{"geometric", number(loop.loop_geometric)},
               {"dynamical_mismatch_plus", number(loop.dynamical_mismatch[0])},
               {"dynamical_mismatch_minus", number(loop.dynamical_mismatch[1])},
               {"arm_up", budget_json(loop.up)},
               {"arm_down", budget_json(loop.down)}};

  ExperimentOptions options;
  options.spin = spin_control(config);
  options.spin.record_history = false;
  options.adiabaticity_threshold = config.interferometer.adiabaticity_threshold;
  const auto rho = initial_density(config.interferometer.rho);

  Table t;
  t.columns = {"mode", "loop_phase_rad", "tr_rho_u_re", "tr_rho_u_im", "I_D1", "I_D2", "visibility",
               "adiabaticity_max"};
  bool normalized = true;
  json outcomes = json::object();
  for (const auto m : modes(config.output.mode)) {
    const auto out = full_experiment(geometry, current, v, rho, c, m, options);
    normalized = normalized && std::abs(out.intensity_d1 + out.intensity_d2 - 1.0) <= 1e-12;
    outcomes[std::string(mode_name(m))] = {{"loop_phase", number(out.loop_phase)},
                                           {"loop_unitary", mat_json(out.loop_unitary)},
                                           {"trace_rho_u", complex_json(out.trace_rho_u)},
                                           {"I_D1", number(out.intensity_d1)},
                                           {"I_D2", number(out.intensity_d2)},
                                           {"visibility", number(out.visibility)},
                                           {"adiabaticity_max", number(out.adiabaticity_max)},
                                           {"warnings", out.warnings}};
    t.add_row({std::string(mode_name(m)), out.loop_phase, out.trace_rho_u.real(), out.trace_rho_u.imag(),
               out.intensity_d1, out.intensity_d2, out.visibility, out.adiabaticity_max});
  }
  r["outcomes"] = outcomes;
  result.outputs = write_table(dir, "interference", t, config.output.format);

  if (!config.interferometer.offset_scan.empty()) {
    Table scan;
    scan.columns = {"wire_offset_y_m", "dynamical_mismatch_plus_rad", "dynamical_mismatch_minus_rad",
                    "I_D1_analytic", "winding", "error"};
    for (double y : config.interferometer.offset_scan) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      try {
        const auto geo = build_geometry(g.arm_half_length, g.arm_height, {g.wire_offset.x, y}, g.wire_radius);
        const auto lu = loop_unitary(geo, current, v, c);
        const auto out = detector_intensities(rho, lu.unitary);
        scan.add_row({y, lu.dynamical_mismatch[0], lu.dynamical_mismatch[1], out.intensity_d1,
                      std::int64_t{lu.winding}, std::string()});
      } catch (const Error& e) {
        scan.add_row({y, nan, nan, nan, std::int64_t{0}, std::string(to_string(e.kind()))});
      }
    }
    auto files = write_table(dir, "interference_offset_scan", scan, config.output.format);
    result.outputs.insert(result.outputs.end(), files.begin(), files.end());
  }

  if (!normalized) result.exit_code = kExitPhysicsGate;
  finish("interfere", config, result, {{"normalization", normalized}});
  return result;
}

CommandResult cmd_sweep(const RunConfig& config) {
  config.validate();
  const fs::path dir = prepare_dir(config);
  CommandResult result;
  const auto records = run_sweep(config, config.output.mode, config.output.jobs);
  result.outputs = write_table(dir, "sweep", sweep_table(records, config.output.timings), config.output.format);
  std::size_t failed = 0;
  bool normalized = true;
  for (const auto& rec : records) {
    if (!rec.error.empty()) ++failed;
    for (auto [d1, d2] : {std::pair{rec.d1_analytic, rec.d2_analytic}, std::pair{rec.d1_propagated, rec.d2_propagated}})
      if (!std::isnan(d1) && std::abs(d1 + d2 - 1.0) > 1e-12) normalized = false;
  }
  result.report = {{"points", records.size()}, {"failed", failed}, {"mode", std::string(to_string(config.output.mode))}};
  if (!normalized) result.exit_code = kExitPhysicsGate;
  finish("sweep", config, result, {{"normalization", normalized}});
  return result;
}

void write_failure_manifest(const std::string& command, const RunConfig& config, const Error& error) {
  try {
    const fs::path dir = prepare_dir(config);
    auto m = make_manifest(command, config, json::object(), {}, exit_code_for(error.kind()));
    m["error"] = {{"kind", std::string(to_string(error.kind()))}, {"message", error.what()}};
    write_text(dir / "manifest.json", dump(m));
  } catch (const Error&) {
  }
}

}  // namespace planarspin::harness
