#include "planarspin/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "planarspin/error.hpp"
#include "planarspin/ode.hpp"

namespace planarspin {

void OrbitParams::validate() const {
  if (!(v > 0.0)) throw Error(ErrorKind::kValidation, "orbit speed v must be positive");
  if (!(wire_radius >= 0.0)) throw Error(ErrorKind::kValidation, "wire radius must be non-negative");
  if (!(b > wire_radius)) throw Error(ErrorKind::kValidation, "impact parameter must exceed the wire radius");
  if (!(current >= 0.0)) throw Error(ErrorKind::kValidation, "wire current must be non-negative");
  if (!(upstream > 1.0)) throw Error(ErrorKind::kValidation, "upstream launch distance must exceed b");
}

double coupling(const OrbitParams& params, const PhysicalConstants& consts) noexcept {
  return branch_sign(params.branch) * consts.c0() * params.current;
}

double mechanical_energy(const PlanarState& s, double kappa, const PhysicalConstants& consts) noexcept {
  return 0.5 * consts.m_n * (s.vx * s.vx + s.vy * s.vy) + kappa / s.r;
}

double angular_momentum(const PlanarState& s, const PhysicalConstants& consts) noexcept {
  return consts.m_n * (s.x * s.vy - s.y * s.vx);
}

double eccentricity(const OrbitParams& params, const PhysicalConstants& consts) {
  params.validate();
  if (params.current == 0.0) return std::numeric_limits<double>::infinity();
  const double ratio = consts.m_n * params.v * params.v * params.b / (consts.c0() * params.current);
  return std::hypot(1.0, ratio);
}

double eccentricity_from_invariants(double energy, double ang_mom, double kappa, const PhysicalConstants& consts) {
  if (kappa == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(1.0 + 2.0 * energy * ang_mom * ang_mom / (consts.m_n * kappa * kappa));
}

// ---------------------------------------------------------------------------------------------
// ConicOrbit

ConicOrbit::ConicOrbit(double energy, double ang_mom, double kappa, double axis, const PhysicalConstants& consts)
    : energy_(energy), ang_mom_(ang_mom), kappa_(kappa), axis_(axis), m_(consts.m_n) {
  if (kappa == 0.0) throw Error(ErrorKind::kRange, "conic orbit undefined without a force (zero current)");
  if (!(energy > 0.0)) throw Error(ErrorKind::kRange, "orbit is not hyperbolic (E <= 0)");
  if (ang_mom == 0.0) throw Error(ErrorKind::kRange, "conic orbit undefined for zero angular momentum");
  p_ = ang_mom * ang_mom / (m_ * std::abs(kappa));
  ecc_sq_minus_one_ = 2.0 * energy * ang_mom * ang_mom / (m_ * kappa * kappa);
  ecc_ = std::sqrt(1.0 + ecc_sq_minus_one_);
}

double ConicOrbit::periapsis() const noexcept { return p_ / (ecc_ + (attractive() ? 1.0 : -1.0)); }

double ConicOrbit::denominator(double theta) const noexcept {
  return ecc_ * std::cos(theta - axis_) + (attractive() ? 1.0 : -1.0);
}

std::pair<double, double> ConicOrbit::asymptotes() const noexcept {
  const double phi_inf = std::acos((attractive() ? -1.0 : 1.0) / ecc_);
  // theta decreases along the motion when L < 0.
  if (ang_mom_ < 0.0) return {axis_ + phi_inf, axis_ - phi_inf};
  return {axis_ - phi_inf, axis_ + phi_inf};
}

double ConicOrbit::radius(double theta) const {
  const double d = denominator(theta);
  if (!(d > 0.0)) {
    const auto [in, out] = asymptotes();
    std::ostringstream os;
    os.precision(17);
    os << "theta = " << theta << " rad lies beyond the conic asymptotes (incoming " << in << " rad, outgoing " << out
       << " rad; 1 + eps sin(theta) = 0 in the launch orientation)";
    throw Error(ErrorKind::kRange, os.str());
  }
  return p_ / d;
}

PlanarState ConicOrbit::state_at(double theta) const {
  const double r = radius(theta);
  const double d = denominator(theta);
  const double phi = theta - axis_;
  const double dr_dtheta = p_ * ecc_ * std::sin(phi) / (d * d);
  const double theta_dot = ang_mom_ / (m_ * r * r);
  const double v_r = dr_dtheta * theta_dot;
  const double v_theta = ang_mom_ / (m_ * r);
  const Vec2 velocity = v_r * unit_radial(theta) + v_theta * unit_azimuthal(theta);
  return PlanarState::from_polar(r, theta, velocity);
}

double ConicOrbit::time_since_periapsis(double theta) const {
  const PlanarState s = state_at(theta);
  const double a = p_ / ecc_sq_minus_one_;
  const double k = std::abs(kappa_);
  // r dr/dt = sqrt(k a / m) eps sinh H holds on both branches and carries the sign of t.
  const double sinh_h = s.r * s.v_r() / (ecc_ * std::sqrt(k * a / m_));
  const double h = std::asinh(sinh_h);
  const double mean_motion = std::sqrt(k / (m_ * a * a * a));
  const double s_sign = attractive() ? 1.0 : -1.0;
  return (ecc_ * sinh_h - s_sign * h) / mean_motion;
}

double ConicOrbit::incoming_angle_at_radius(double r) const {
  if (r < periapsis()) throw Error(ErrorKind::kRange, "radius below periapsis");
  const double s = attractive() ? 1.0 : -1.0;
  const double c = std::clamp((p_ / r - s) / ecc_, -1.0, 1.0);
  const double phi = std::acos(c);
  return ang_mom_ < 0.0 ? axis_ + phi : axis_ - phi;
}

ConicOrbit conic_orbit(const OrbitParams& params, const PhysicalConstants& consts) {
  params.validate();
  const double kappa = coupling(params, consts);
  const double energy = 0.5 * consts.m_n * params.v * params.v;
  const double ang_mom = -consts.m_n * params.v * params.b;
  return ConicOrbit(energy, ang_mom, kappa, kPi / 2.0, consts);
}

ConicOrbit conic_from_state(const PlanarState& s, double kappa, const PhysicalConstants& consts) {
  const double l = angular_momentum(s, consts);
  const double e = mechanical_energy(s, kappa, consts);
  // Laplace-Runge-Lenz vector for V = kappa / r: A = p x L + m kappa r_hat; it points to periapsis.
  const Vec2 p = consts.m_n * s.velocity();
  const Vec2 lrl = Vec2{p.y * l, -p.x * l} + (consts.m_n * kappa / s.r) * s.position();
  return ConicOrbit(e, l, kappa, std::atan2(lrl.y, lrl.x), consts);
}

// ---------------------------------------------------------------------------------------------
// Trajectory

std::vector<PlanarState> Trajectory::states() const {
  std::vector<PlanarState> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.state);
  return out;
}

double Trajectory::max_energy_drift() const noexcept {
  if (samples.empty()) return 0.0;
  const double e0 = samples.front().energy;
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.energy - e0) / std::abs(e0));
  return worst;
}

double Trajectory::max_angular_momentum_drift() const noexcept {
  if (samples.empty()) return 0.0;
  const double l0 = samples.front().ang_mom;
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.ang_mom - l0) / std::abs(l0));
  return worst;
}

Trajectory analytic_orbit(const ConicOrbit& conic, SpinBranch branch, double current, std::span<const double> theta_grid) {
  Trajectory traj;
  traj.branch = branch;
  traj.current = current;
  traj.samples.reserve(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (i > 0) {
      const double step = theta_grid[i] - theta_grid[i - 1];
      if (step == 0.0 || (i > 1 && (step > 0.0) != (theta_grid[i - 1] - theta_grid[i - 2] > 0.0)))
        throw Error(ErrorKind::kRange, "theta grid must be strictly monotone");
      if (std::abs(step) >= kPi) throw Error(ErrorKind::kRange, "theta grid increments must be below pi");
    }
    const double theta = theta_grid[i];
    TrajectorySample s;
    s.state = conic.state_at(theta);
    s.t = conic.time_since_periapsis(theta);
    s.energy = conic.energy();
    s.ang_mom = conic.angular_momentum();
    traj.samples.push_back(s);
  }
  // Keep time increasing whichever way the grid was given.
  if (traj.samples.size() > 1 && traj.samples.front().t > traj.samples.back().t)
    std::reverse(traj.samples.begin(), traj.samples.end());
  return traj;
}

Trajectory analytic_orbit(const OrbitParams& params, const PhysicalConstants& consts, std::span<const double> theta_grid) {
  return analytic_orbit(conic_orbit(params, consts), params.branch, params.current, theta_grid);
}

PlanarState launch_state(const OrbitParams& params, const PhysicalConstants& consts) {
  params.validate();
  const double kappa = coupling(params, consts);
  if (kappa == 0.0 || params.launch == LaunchMode::kHorizontal) {
    const Vec2 pos{-params.upstream * params.b, params.b};
    const double r0 = norm(pos);
    const double v0_sq = params.v * params.v - 2.0 * kappa / (consts.m_n * r0);
    if (!(v0_sq > 0.0))
      throw Error(ErrorKind::kRange, "neutron cannot reach the launch point with the requested asymptotic speed");
    return PlanarState::from_cartesian(pos, {std::sqrt(v0_sq), 0.0}, kPi);
  }
  const ConicOrbit conic = conic_orbit(params, consts);
  const double r0 = params.upstream * params.b;
  if (r0 <= conic.periapsis()) throw Error(ErrorKind::kRange, "launch radius inside periapsis");
  return conic.state_at(conic.incoming_angle_at_radius(r0));
}

double default_time_span(const OrbitParams& params, const PhysicalConstants& consts) {
  const PlanarState s0 = launch_state(params, consts);
  const double kappa = coupling(params, consts);
  if (kappa == 0.0) return 2.0 * params.upstream * params.b / params.v;
  const ConicOrbit conic = conic_from_state(s0, kappa, consts);
  return -2.0 * conic.time_since_periapsis(s0.theta);
}

Trajectory integrate_orbit(const OrbitParams& params, const PhysicalConstants& consts, double t_span,
                           const OrbitTolerances& tol) {
  params.validate();
  consts.validate();
  if (!(tol.relative > 0.0) || !(tol.conservation > 0.0))
    throw Error(ErrorKind::kValidation, "orbit tolerances must be positive");

  const double kappa = coupling(params, consts);
  const double m = consts.m_n;
  const PlanarState s0 = launch_state(params, consts);
  const double span = t_span > 0.0 ? t_span : default_time_span(params, consts);
  const Vec2 x0 = s0.position();
  const Vec2 v0 = s0.velocity();

  using State = ode::State<4>;
  // Encke split: integrate the displacement d(t) from x0 + v0 t so that small deflections
  // keep full relative precision.
  auto rhs = [&](double t, const State& d) -> State {
    const Vec2 pos = x0 + t * v0 + Vec2{d[0], d[1]};
    const double r = norm(pos);
    const double f = kappa / (m * r * r * r);
    return {d[2], d[3], f * pos.x, f * pos.y};
  };

  ode::AdaptiveOptions<4> opt;
  opt.rtol = tol.relative;
  const double deflection_scale = kappa == 0.0 ? params.b : std::abs(kappa) / (m * params.v * params.v);
  const double atol_pos = 1e-3 * tol.relative * deflection_scale;
  const double atol_vel = atol_pos * params.v / params.b;
  opt.atol = {atol_pos, atol_pos, atol_vel, atol_vel};
  opt.max_step = tol.max_step > 0.0 ? tol.max_step : span / 500.0;

  Trajectory traj;
  traj.branch = params.branch;
  traj.current = params.current;

  auto push = [&](double t, const State& d) {
    const Vec2 pos = x0 + t * v0 + Vec2{d[0], d[1]};
    const Vec2 vel = v0 + Vec2{d[2], d[3]};
    const double hint = traj.samples.empty() ? s0.theta : traj.samples.back().state.theta;
    TrajectorySample s;
    s.t = t;
    s.state = PlanarState::from_cartesian(pos, vel, hint);
    if (s.state.r <= params.wire_radius) {
      std::ostringstream os;
      os << "orbit entered the wire exclusion disk at t = " << t << " s (r = " << s.state.r << " m)";
      throw Error(ErrorKind::kWireCollision, os.str());
    }
    if (std::abs(s.state.theta - hint) >= kPi)
      throw Error(ErrorKind::kRange, "orbit sampling too coarse: angular increment reached pi");
    s.energy = mechanical_energy(s.state, kappa, consts);
    s.ang_mom = angular_momentum(s.state, consts);
    traj.samples.push_back(s);
    traj.deviations.push_back({d[0], d[1]});
  };

  push(0.0, State{});
  if (tol.dense_samples > 1) {
    const std::size_t n = tol.dense_samples;
    std::size_t next = 1;
    ode::integrate_dopri5<4>(rhs, 0.0, State{}, span, opt, [&](double t, const State& d, const ode::DenseStep<4>& dense) {
      while (next < n) {
        const double tk = (next == n - 1) ? span : span * static_cast<double>(next) / static_cast<double>(n - 1);
        if (tk > t) break;
        push(tk, tk == t ? d : dense(tk));
        ++next;
      }
    });
  } else {
    ode::integrate_dopri5<4>(rhs, 0.0, State{}, span, opt,
                             [&](double t, const State& d, const ode::DenseStep<4>&) { push(t, d); });
  }

  const double drift_e = traj.max_energy_drift();
  const double drift_l = params.current == 0.0 ? 0.0 : traj.max_angular_momentum_drift();
  if (drift_e > tol.conservation || drift_l > tol.conservation) {
    std::ostringstream os;
    os << "conservation gate failed: relative energy drift " << drift_e << ", angular momentum drift " << drift_l
       << " (bound " << tol.conservation << ")";
    throw Error(ErrorKind::kTolerance, os.str());
  }
  return traj;
}

double max_transverse_deviation(const Trajectory& traj, double x_min, double x_max) {
  if (traj.deviations.size() != traj.samples.size())
    throw Error(ErrorKind::kValidation, "trajectory carries no deviation record");
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const double x = traj.samples[i].state.x;
    if (x >= x_min && x <= x_max) worst = std::max(worst, std::abs(traj.deviations[i].y));
  }
  return worst;
}

CurrentWindow current_window(double v, double b, const PhysicalConstants& consts, double margin) {
  if (!(v > 0.0) || !(b > 0.0)) throw Error(ErrorKind::kValidation, "current window needs v > 0 and b > 0");
  if (!(margin >= 1.0)) throw Error(ErrorKind::kValidation, "current window margin must be >= 1");
  const double c0 = consts.c0();
  CurrentWindow w{consts.hbar * v / (4.0 * c0), consts.m_n * v * v * b / c0};
  if (!w.admits(margin)) {
    std::ostringstream os;
    os << "empty current window: I_high / I_low = " << w.ratio() << " <= margin^2 = " << margin * margin
       << " (I_low = " << w.low << " A, I_high = " << w.high << " A); impact parameter must exceed "
       << margin * margin * consts.hbar / (4.0 * consts.m_n * v) << " m";
    throw Error(ErrorKind::kEmptyWindow, os.str());
  }
  return w;
}

double wire_feasibility(double current_density_limit, double wire_radius) {
  if (!(current_density_limit >= 0.0) || !(wire_radius >= 0.0))
    throw Error(ErrorKind::kValidation, "current density and wire radius must be non-negative");
  return current_density_limit * kPi * wire_radius * wire_radius;
}

}  // namespace planarspin
