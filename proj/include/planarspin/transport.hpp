#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "planarspin/constants.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/planar.hpp"
#include "planarspin/spin.hpp"

namespace planarspin {

struct Kinematics {
  Vec2 position;  // wire frame
  Vec2 velocity;
};

/// A prescribed classical motion r(t) in the wire frame.
class MotionPath {
 public:
  virtual ~MotionPath() = default;
  virtual double start_time() const = 0;
  virtual double end_time() const = 0;
  virtual Kinematics at(double t) const = 0;
  /// Times where the velocity is discontinuous; the spin integrator steps onto them.
  virtual std::vector<double> breakpoints() const { return {}; }
};

/// Constant-speed traversal of a polyline.
class PolylineMotion final : public MotionPath {
 public:
  PolylineMotion(std::vector<Vec2> vertices, double speed, double t0 = 0.0);

  double start_time() const override { return times_.front(); }
  double end_time() const override { return times_.back(); }
  Kinematics at(double t) const override;
  std::vector<double> breakpoints() const override;

 private:
  std::vector<Vec2> vertices_;
  std::vector<double> times_;
  double speed_;
};

/// Uniform circular motion around the wire.
class CircularMotion final : public MotionPath {
 public:
  /// Counterclockwise for speed > 0, clockwise for speed < 0.
  CircularMotion(double radius, double speed, double turns = 1.0, double theta0 = 0.0);

  double start_time() const override { return 0.0; }
  double end_time() const override { return duration_; }
  Kinematics at(double t) const override;

 private:
  double radius_, speed_, theta0_, duration_;
};

/// Cubic Hermite interpolation of trajectory samples (positions and velocities).
class TrajectoryMotion final : public MotionPath {
 public:
  explicit TrajectoryMotion(const Trajectory& traj);

  double start_time() const override { return t_.front(); }
  double end_time() const override { return t_.back(); }
  Kinematics at(double t) const override;

 private:
  std::vector<double> t_;
  std::vector<Vec2> pos_, vel_;
};

/// hbar |v_theta| / (4 C0 I): the adiabatic quotient in closed form. Independent of r.
double adiabaticity_functional(const PlanarState& p, double current, const PhysicalConstants& consts);

/// dH_sc/dt = -(C0 I / r^2)(v_r sigma_theta + v_theta sigma_r) along the motion.
Mat2 hamiltonian_rate(const PlanarState& p, double current, const PhysicalConstants& consts);

struct MatrixElementCheck {
  Complex closed_form;   // i C0 I v_theta / r^2
  Complex numeric;       // <+| dH/dt |-> with the local eigenframe
  Complex diagonal_radial;  // <+| sigma_r |+>, zero
  double gap_squared = 0.0;     // (E_+ - E_-)^2 from the Hamiltonian's eigenvalues
  double relative_difference = 0.0;
  /// hbar |<+|dH/dt|->| / (E_+ - E_-)^2 from the numeric pieces.
  double adiabatic_quotient = 0.0;
};

MatrixElementCheck matrix_element_check(const PlanarState& p, double current, const PhysicalConstants& consts);

struct SpinStepControl {
  double tolerance = 1e-10;         // local error per step (propagator max-norm, step doubling)
  double larmor_fraction = 1.0 / 50;   // h <= fraction * 2 pi hbar r / (2 C0 I)
  double rotation_fraction = 1.0 / 100;  // h <= fraction * r / |v_theta|
  double unitarity_tolerance = 1e-10;
  double wire_radius = kDefaultWireRadius;
  std::size_t max_steps = 20'000'000;
  bool record_history = true;
};

struct BranchTransport {
  std::vector<double> fidelity;  // |<b; r_t| U(t) |b; r_0>|^2 at history times
  double final_fidelity = 0.0;
  double dynamical_phase = 0.0;  // -(1/hbar) int E_b dt
  double geometric_phase = 0.0;  // arg<b; r_T|U|b; r_0> - dynamical, in (-pi, pi], fixed gauge
};

struct TransportResult {
  Spinor final_state;
  Mat2 propagator;
  std::vector<double> times;
  std::vector<Spinor> state_history;
  /// Fidelity with the local eigenstate of the tracked branch; empty when the
  /// initial state is an equal superposition.
  std::vector<double> fidelity_history;
  std::optional<SpinBranch> tracked_branch;
  std::array<BranchTransport, 2> branches;  // indexed by branch_index
  double total_phase = 0.0;      // arg<psi(0)|psi(T)>, NaN when the overlap vanishes
  double dynamical_phase = 0.0;  // tracked branch, NaN otherwise
  double geometric_phase = 0.0;  // tracked branch, NaN otherwise
  double adiabaticity_max = 0.0;
  double max_norm_error = 0.0;
  std::size_t steps = 0;
};

/// Solves i hbar dpsi/dt = H_sc(r_t) psi along the motion with an adaptive fourth-order
/// Magnus integrator (each step is an exact SU(2) rotation, so unitarity holds to rounding).
/// Throws Error(kSingularity) near the wire, Error(kStepFailure) when the step budget is
/// exhausted and Error(kTolerance) if the unitarity gate fails.
TransportResult propagate_spin(const MotionPath& path, const Spinor& initial, double current,
                               const PhysicalConstants& consts, const SpinStepControl& control = {});
TransportResult propagate_spin(const Trajectory& traj, const Spinor& initial, double current,
                               const PhysicalConstants& consts, const SpinStepControl& control = {});

struct ProfilePoint {
  double t = 0.0;
  double value = 0.0;
};

std::vector<ProfilePoint> adiabatic_profile(const Trajectory& traj, double current, const PhysicalConstants& consts);
std::vector<ProfilePoint> adiabatic_profile(const MotionPath& path, double current, const PhysicalConstants& consts,
                                            std::size_t samples);

}  // namespace planarspin
