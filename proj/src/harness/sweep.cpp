#include "planarspin/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "planarspin/error.hpp"
#include "planarspin/harness/commands.hpp"
#include "planarspin/interferometer.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/transport.hpp"

namespace planarspin::harness {

std::vector<SweepPoint> expand_grid(const RunConfig& config) {
  config.validate();
  auto sorted = [](std::vector<double> g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  };
  const auto vs = sorted(config.sweep.v);
  const auto bs = sorted(config.sweep.b);
  const auto is = sorted(config.sweep.current);
  std::vector<SweepPoint> points;
  points.reserve(vs.size() * bs.size() * is.size() * config.sweep.wire_offset_y.size());
  for (double v : vs)
    for (double b : bs)
      for (double i : is)
        for (std::size_t g = 0; g < config.sweep.wire_offset_y.size(); ++g)
          points.push_back({v, b, i, static_cast<std::int64_t>(g), config.sweep.wire_offset_y[g]});
  return points;
}

SweepRecord evaluate_point(const SweepPoint& point, const RunConfig& config, ModeSelection mode) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.input = point;
  const auto& consts = config.constants;
  try {
    OrbitParams params{point.v, point.b, point.current, SpinBranch::kPlus, config.orbit.launch,
                       config.orbit.upstream, config.geometry.wire_radius};
    params.validate();
    rec.eccentricity = eccentricity(params, consts);
    if (point.current > 0) {
      const auto conic = conic_orbit(params, consts);
      const double v_theta_max = std::abs(conic.angular_momentum()) / (consts.m_n * conic.periapsis());
      rec.adiabaticity_max = consts.hbar * v_theta_max / (4.0 * consts.c0() * point.current);
    } else {
      rec.adiabaticity_max = std::numeric_limits<double>::infinity();
    }

    const auto geometry = build_geometry(config.geometry.arm_half_length, config.geometry.arm_height,
                                         {config.geometry.wire_offset.x, point.wire_offset_y},
                                         config.geometry.wire_radius);
    const auto loop = loop_unitary(geometry, point.current, point.v, consts);
    rec.loop_phase = wrap_two_pi(loop.loop_geometric);
    rec.dynamical_mismatch = std::max(std::abs(loop.dynamical_mismatch[0]), std::abs(loop.dynamical_mismatch[1]));

    const auto rho = initial_density(config.interferometer.rho);
    ExperimentOptions options;
    options.spin = spin_control(config);
    options.adiabaticity_threshold = config.interferometer.adiabaticity_threshold;

    if (mode != ModeSelection::kPropagated) {
      const auto out = full_experiment(geometry, point.current, point.v, rho, consts, ExperimentMode::kAnalytic, options);
      rec.d1_analytic = out.intensity_d1;
      rec.d2_analytic = out.intensity_d2;
      rec.arm_adiabaticity_max = out.adiabaticity_max;
    }
    if (mode != ModeSelection::kAnalytic) {
      const auto out =
          full_experiment(geometry, point.current, point.v, rho, consts, ExperimentMode::kPropagated, options);
      rec.d1_propagated = out.intensity_d1;
      rec.d2_propagated = out.intensity_d2;
      rec.arm_adiabaticity_max = out.adiabaticity_max;

      const auto traj = integrate_orbit(params, consts, 0.0, orbit_tolerances(config));
      auto control = spin_control(config);
      control.record_history = false;
      const auto spin = propagate_spin(traj, local_eigenframe(traj.samples.front().state).plus, point.current,
                                       consts, control);
      rec.fidelity = spin.branches[branch_index(SpinBranch::kPlus)].final_fidelity;
    }
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.kind()));
    rec.message = e.what();
  } catch (const std::exception& e) {
    rec.error = "internal";
    rec.message = e.what();
  }
  rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<SweepRecord> run_sweep(const RunConfig& config, ModeSelection mode, unsigned jobs) {
  const auto points = expand_grid(config);
  std::vector<SweepRecord> records(points.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) records[i] = evaluate_point(points[i], config, mode);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) records[i] = evaluate_point(points[i], config, mode);
      });
    }
  }
  std::sort(records.begin(), records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.input < b.input; });
  return records;
}

Table sweep_table(const std::vector<SweepRecord>& records, bool timings) {
  Table t;
  t.columns = {"v_m_per_s",        "b_m",
               "current_A",        "geometry_id",
               "wire_offset_y_m",  "eccentricity",
               "adiabaticity_max", "arm_adiabaticity_max",
               "fidelity",         "loop_phase_rad",
               "dynamical_mismatch_rad", "I_D1_analytic",
               "I_D2_analytic",    "I_D1_propagated",
               "I_D2_propagated",  "error"};
  if (timings) t.columns.push_back("runtime_s");
  for (const auto& r : records) {
    std::vector<Cell> row{r.input.v,           r.input.b,        r.input.current,        r.input.geometry_id,
                          r.input.wire_offset_y, r.eccentricity, r.adiabaticity_max,     r.arm_adiabaticity_max,
                          r.fidelity,          r.loop_phase,     r.dynamical_mismatch,   r.d1_analytic,
                          r.d2_analytic,       r.d1_propagated,  r.d2_propagated,        r.error};
    if (timings) row.emplace_back(r.runtime);
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace planarspin::harness
