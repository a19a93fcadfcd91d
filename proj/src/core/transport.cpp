#include "planarspin/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "planarspin/error.hpp"
#include "planarspin/field.hpp"

namespace planarspin {

// ---------------------------------------------------------------------------------------------
// Motions

PolylineMotion::PolylineMotion(std::vector<Vec2> vertices, double speed, double t0) : speed_(speed) {
  if (!(speed > 0.0)) throw Error(ErrorKind::kValidation, "traversal speed must be positive");
  for (Vec2 v : vertices)
    if (vertices_.empty() || !(v == vertices_.back())) vertices_.push_back(v);
  if (vertices_.size() < 2) throw Error(ErrorKind::kValidation, "polyline motion needs two distinct vertices");
  times_.push_back(t0);
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    times_.push_back(times_.back() + norm(vertices_[i] - vertices_[i - 1]) / speed_);
}

Kinematics PolylineMotion::at(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t seg = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  seg = std::min(seg, vertices_.size() - 2);
  const Vec2 d = vertices_[seg + 1] - vertices_[seg];
  const Vec2 dir = d / norm(d);
  return {vertices_[seg] + (speed_ * (t - times_[seg])) * dir, speed_ * dir};
}

std::vector<double> PolylineMotion::breakpoints() const {
  return std::vector<double>(times_.begin() + 1, times_.end() - 1);
}

CircularMotion::CircularMotion(double radius, double speed, double turns, double theta0)
    : radius_(radius), speed_(speed), theta0_(theta0) {
  if (!(radius > 0.0) || speed == 0.0 || !(turns > 0.0))
    throw Error(ErrorKind::kValidation, "circular motion needs radius > 0, speed != 0 and turns > 0");
  duration_ = turns * kTwoPi * radius / std::abs(speed);
}

Kinematics CircularMotion::at(double t) const {
  const double theta = theta0_ + speed_ * t / radius_;
  return {radius_ * unit_radial(theta), speed_ * unit_azimuthal(theta)};
}

TrajectoryMotion::TrajectoryMotion(const Trajectory& traj) {
  if (traj.samples.size() < 2) throw Error(ErrorKind::kValidation, "trajectory needs at least two samples");
  for (const auto& s : traj.samples) {
    if (!t_.empty() && !(s.t > t_.back())) throw Error(ErrorKind::kValidation, "trajectory time must increase");
    t_.push_back(s.t);
    pos_.push_back(s.state.position());
    vel_.push_back(s.state.velocity());
  }
}

Kinematics TrajectoryMotion::at(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  i = std::min(i, t_.size() - 2);
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1, d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
  const Vec2 pos = h00 * pos_[i] + (h10 * h) * vel_[i] + h01 * pos_[i + 1] + (h11 * h) * vel_[i + 1];
  const Vec2 vel = (d00 / h) * pos_[i] + d10 * vel_[i] + (d01 / h) * pos_[i + 1] + d11 * vel_[i + 1];
  return {pos, vel};
}

// ---------------------------------------------------------------------------------------------
// Adiabaticity

double adiabaticity_functional(const PlanarState& p, double current, const PhysicalConstants& consts) {
  if (!(p.r > 0.0)) throw Error(ErrorKind::kSingularity, "adiabaticity functional is singular at the wire");
  if (!(current > 0.0)) throw Error(ErrorKind::kValidation, "wire current must be positive");
  return consts.hbar * std::abs(p.v_theta()) / (4.0 * consts.c0() * current);
}

Mat2 hamiltonian_rate(const PlanarState& p, double current, const PhysicalConstants& consts) {
  if (!(p.r > 0.0)) throw Error(ErrorKind::kSingularity, "Hamiltonian rate is singular at the wire");
  const double theta = std::atan2(p.y, p.x);
  const double scale = -consts.c0() * current / (p.r * p.r);
  return Complex(scale * p.v_r(), 0.0) * sigma_azimuthal(theta) + Complex(scale * p.v_theta(), 0.0) * sigma_radial(theta);
}

MatrixElementCheck matrix_element_check(const PlanarState& p, double current, const PhysicalConstants& consts) {
  const Mat2 rate = hamiltonian_rate(p, current, consts);
  const Eigenframe frame = local_eigenframe(std::atan2(p.y, p.x));
  MatrixElementCheck out;
  const double c0i = consts.c0() * current;
  out.closed_form = Complex(0.0, c0i * p.v_theta() / (p.r * p.r));
  out.numeric = sandwich(frame.plus, rate, frame.minus);
  out.diagonal_radial = sandwich(frame.plus, sigma_radial(std::atan2(p.y, p.x)), frame.plus);
  const auto ev = hermitian_eigenvalues(zeeman_hamiltonian(p, current, consts));
  out.gap_squared = (ev[1] - ev[0]) * (ev[1] - ev[0]);
  const double speed_scale = c0i * norm(p.velocity()) / (p.r * p.r);
  const double denom = std::max(std::abs(out.closed_form), speed_scale);
  out.relative_difference = denom > 0.0 ? std::abs(out.numeric - out.closed_form) / denom : 0.0;
  out.adiabatic_quotient = consts.hbar * std::abs(out.numeric) / out.gap_squared;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Propagation

namespace {

struct LocalField {
  double r;
  double theta;
  double v_theta;
};

class SpinStepper {
 public:
  SpinStepper(const MotionPath& path, double current, const PhysicalConstants& consts, double wire_radius)
      : path_(path), c0i_(consts.c0() * current), hbar_(consts.hbar), wire_radius_(wire_radius) {}

  LocalField field_at(double t) const {
    const Kinematics k = path_.at(t);
    const double r = norm(k.position);
    if (r <= wire_radius_) {
      std::ostringstream os;
      os << "spin transport path enters the wire exclusion disk at t = " << t << " s (r = " << r << " m)";
      throw Error(ErrorKind::kSingularity, os.str());
    }
    return {r, std::atan2(k.position.y, k.position.x), cross(k.position, k.velocity) / r};
  }

  Mat2 hamiltonian(const LocalField& f) const {
    return Complex(c0i_ / f.r, 0.0) * sigma_azimuthal(f.theta);
  }

  /// Fourth-order Magnus step; also returns int (C0 I / r) dt over the step and the peak |v_theta|.
  Mat2 step(double t, double h, double& level_integral, double& peak_v_theta) const {
    constexpr double kOffset = 0.28867513459481288225;  // sqrt(3)/6
    const LocalField f1 = field_at(t + h * (0.5 - kOffset));
    const LocalField f2 = field_at(t + h * (0.5 + kOffset));
    const Mat2 h1 = hamiltonian(f1);
    const Mat2 h2 = hamiltonian(f2);
    const Mat2 comm = h2 * h1 - h1 * h2;
    const double a = h / (2.0 * hbar_);
    const double b = std::sqrt(3.0) / 12.0 * (h / hbar_) * (h / hbar_);
    const Mat2 g = Complex(a, 0.0) * (h1 + h2) + Complex(0.0, -b) * comm;
    level_integral += 0.5 * h * (c0i_ / f1.r + c0i_ / f2.r);
    peak_v_theta = std::max({peak_v_theta, std::abs(f1.v_theta), std::abs(f2.v_theta)});
    return exp_minus_i(g);
  }

  /// Largest step allowed at t by the Larmor-period and frame-rotation resolution bounds.
  double max_step(double t, const SpinStepControl& c) const {
    const LocalField f = field_at(t);
    const double larmor_period = kTwoPi * hbar_ * f.r / (2.0 * c0i_);
    double bound = c.larmor_fraction * larmor_period;
    if (f.v_theta != 0.0) bound = std::min(bound, c.rotation_fraction * f.r / std::abs(f.v_theta));
    return bound;
  }

 private:
  const MotionPath& path_;
  double c0i_;
  double hbar_;
  double wire_radius_;
};

}  // namespace

TransportResult propagate_spin(const MotionPath& path, const Spinor& initial, double current,
                               const PhysicalConstants& consts, const SpinStepControl& control) {
  if (!(current > 0.0)) throw Error(ErrorKind::kValidation, "wire current must be positive");
  if (!(control.tolerance > 0.0) || !(control.larmor_fraction > 0.0) || !(control.rotation_fraction > 0.0))
    throw Error(ErrorKind::kValidation, "spin step control parameters must be positive");
  if (std::abs(initial.norm() - 1.0) > 1e-12) throw Error(ErrorKind::kValidation, "initial spinor is not normalized");

  const SpinStepper stepper(path, current, consts, control.wire_radius);
  const double t0 = path.start_time();
  const double t1 = path.end_time();
  std::vector<double> stops = path.breakpoints();
  stops.push_back(t1);
  std::sort(stops.begin(), stops.end());

  const LocalField start = stepper.field_at(t0);
  const Eigenframe frame0 = local_eigenframe(start.theta);
  const std::array<Spinor, 2> basis0{frame0.plus, frame0.minus};

  TransportResult res;
  const double pop_plus = std::norm(inner(frame0.plus, initial));
  if (std::abs(pop_plus - 0.5) > 1e-9) res.tracked_branch = pop_plus > 0.5 ? SpinBranch::kPlus : SpinBranch::kMinus;

  Mat2 u = Mat2::identity();
  double level_integral = 0.0;  // int C0 I / r dt
  double peak_v_theta = std::abs(start.v_theta);

  auto record = [&](double t, const LocalField& f) {
    const Spinor psi = u * initial;
    res.max_norm_error = std::max(res.max_norm_error, std::abs(psi.norm() - 1.0));
    if (!control.record_history) return;
    const Eigenframe frame = local_eigenframe(f.theta);
    const std::array<Spinor, 2> basis{frame.plus, frame.minus};
    res.times.push_back(t);
    res.state_history.push_back(psi);
    for (std::size_t b = 0; b < 2; ++b)
      res.branches[b].fidelity.push_back(std::norm(inner(basis[b], u * basis0[b])));
    if (res.tracked_branch) res.fidelity_history.push_back(std::norm(inner(basis[branch_index(*res.tracked_branch)], psi)));
  };
  record(t0, start);

  double t = t0;
  double h_pref = stepper.max_step(t0, control);
  std::size_t stop_index = 0;
  while (t < t1) {
    while (stop_index < stops.size() && stops[stop_index] <= t) ++stop_index;
    const double next_stop = stops[std::min(stop_index, stops.size() - 1)];
    double h = std::min(h_pref, stepper.max_step(t, control));
    bool hits_stop = false;
    if (t + h >= next_stop) {
      h = next_stop - t;
      hits_stop = true;
    }
    if (res.steps >= control.max_steps)
      throw Error(ErrorKind::kStepFailure, "spin propagation exceeded the step budget (" +
                                               std::to_string(control.max_steps) + " steps)");
    if (!(h > 0.0) || h <= std::abs(t) * 1e-15)
      throw Error(ErrorKind::kStepFailure, "spin propagation step size underflow");

    double level_full = 0.0, level_half = 0.0;
    double vt_full = 0.0, vt_half = 0.0;
    const Mat2 full = stepper.step(t, h, level_full, vt_full);
    const Mat2 first = stepper.step(t, 0.5 * h, level_half, vt_half);
    const Mat2 second = stepper.step(t + 0.5 * h, 0.5 * h, level_half, vt_half);
    const Mat2 half = second * first;
    const double err = (full - half).max_abs();

    if (err <= control.tolerance) {
      u = half * u;
      level_integral += level_half;
      peak_v_theta = std::max(peak_v_theta, vt_half);
      t = hits_stop ? next_stop : t + h;
      ++res.steps;
      const LocalField f = stepper.field_at(t);
      peak_v_theta = std::max(peak_v_theta, std::abs(f.v_theta));
      record(t, f);
      const double grow = err > 0.0 ? 0.9 * std::pow(control.tolerance / err, 0.2) : 4.0;
      // A step shortened to land on a breakpoint says nothing about the preferred size.
      if (!hits_stop || grow < 1.0) h_pref = h * std::clamp(grow, 0.2, 4.0);
    } else {
      h_pref = h * std::clamp(0.9 * std::pow(control.tolerance / err, 0.2), 0.1, 0.9);
    }
  }

  const LocalField end = stepper.field_at(t1);
  const Eigenframe frame1 = local_eigenframe(end.theta);
  const std::array<Spinor, 2> basis1{frame1.plus, frame1.minus};

  res.propagator = u;
  res.final_state = u * initial;
  res.adiabaticity_max = consts.hbar * peak_v_theta / (4.0 * consts.c0() * current);
  const double base_phase = -level_integral / consts.hbar;
  for (std::size_t b = 0; b < 2; ++b) {
    const Complex amp = inner(basis1[b], u * basis0[b]);
    auto& br = res.branches[b];
    br.final_fidelity = std::norm(amp);
    br.dynamical_phase = (b == 0 ? 1.0 : -1.0) * base_phase;
    br.geometric_phase = wrap_pi(std::arg(amp) - br.dynamical_phase);
  }
  const Complex overlap = inner(initial, res.final_state);
  res.total_phase = std::abs(overlap) > 1e-12 ? std::arg(overlap) : std::numeric_limits<double>::quiet_NaN();
  if (res.tracked_branch) {
    const auto& br = res.branches[branch_index(*res.tracked_branch)];
    res.dynamical_phase = br.dynamical_phase;
    res.geometric_phase = br.geometric_phase;
  } else {
    res.dynamical_phase = std::numeric_limits<double>::quiet_NaN();
    res.geometric_phase = std::numeric_limits<double>::quiet_NaN();
  }

  const double unitarity = (u.adjoint() * u - Mat2::identity()).max_abs();
  res.max_norm_error = std::max(res.max_norm_error, unitarity);
  if (res.max_norm_error > control.unitarity_tolerance) {
    std::ostringstream os;
    os << "unitarity gate failed: norm error " << res.max_norm_error << " exceeds " << control.unitarity_tolerance;
    throw Error(ErrorKind::kTolerance, os.str());
  }
  return res;
}

TransportResult propagate_spin(const Trajectory& traj, const Spinor& initial, double current,
                               const PhysicalConstants& consts, const SpinStepControl& control) {
  return propagate_spin(TrajectoryMotion(traj), initial, current, consts, control);
}

std::vector<ProfilePoint> adiabatic_profile(const Trajectory& traj, double current, const PhysicalConstants& consts) {
  std::vector<ProfilePoint> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back({s.t, adiabaticity_functional(s.state, current, consts)});
  return out;
}

std::vector<ProfilePoint> adiabatic_profile(const MotionPath& path, double current, const PhysicalConstants& consts,
                                            std::size_t samples) {
  if (samples < 2) throw Error(ErrorKind::kValidation, "profile needs at least two samples");
  std::vector<ProfilePoint> out;
  out.reserve(samples);
  const double t0 = path.start_time(), t1 = path.end_time();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const Kinematics k = path.at(t);
    out.push_back({t, adiabaticity_functional(PlanarState::from_cartesian(k.position, k.velocity), current, consts)});
  }
  return out;
}

}  // namespace planarspin
