#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "planarspin/constants.hpp"
#include "planarspin/planar.hpp"

namespace planarspin {

/// Spin branch selecting the potential V_+ = +C0 I / r (repulsive) or V_- = -C0 I / r (attractive).
enum class SpinBranch { kPlus, kMinus };

constexpr int branch_sign(SpinBranch b) noexcept { return b == SpinBranch::kPlus ? +1 : -1; }
constexpr std::size_t branch_index(SpinBranch b) noexcept { return b == SpinBranch::kPlus ? 0 : 1; }

/// How the integrated orbit is started.
enum class LaunchMode {
  kAsymptotic,  // on the exact conic with asymptotic speed v and impact parameter b
  kHorizontal,  // at (-upstream * b, b) moving along +x with total energy m v^2 / 2
};

struct OrbitParams {
  double v = 2000.0;      // asymptotic speed (m/s)
  double b = 0.1;         // impact parameter (m)
  double current = 400.0;  // wire current (A); 0 switches the force off
  SpinBranch branch = SpinBranch::kPlus;
  LaunchMode launch = LaunchMode::kAsymptotic;
  double upstream = 20.0;  // launch distance in units of b
  double wire_radius = kDefaultWireRadius;

  /// Throws Error(kValidation) unless v > 0, b > wire_radius, current >= 0, upstream > 1.
  void validate() const;
};

/// Signed coupling kappa in V = kappa / r.
double coupling(const OrbitParams& params, const PhysicalConstants& consts) noexcept;

double mechanical_energy(const PlanarState& s, double kappa, const PhysicalConstants& consts) noexcept;
double angular_momentum(const PlanarState& s, const PhysicalConstants& consts) noexcept;

/// eps = sqrt(1 + m^2 v^4 b^2 / (C0^2 I^2)); infinite when I = 0.
double eccentricity(const OrbitParams& params, const PhysicalConstants& consts);
/// eps = sqrt(1 + 2 E L^2 / (m kappa^2)) from the invariants directly.
double eccentricity_from_invariants(double energy, double ang_mom, double kappa, const PhysicalConstants& consts);

/// Hyperbolic Kepler orbit r(theta) = p / (eps cos(theta - axis) + s), with s = +1 for the
/// attractive branch and s = -1 for the repulsive one. With axis = pi/2 and the attractive
/// sign this is r = L^2 / (m C0 I) (1 + eps sin theta)^-1.
class ConicOrbit {
 public:
  ConicOrbit(double energy, double ang_mom, double kappa, double axis, const PhysicalConstants& consts);

  double semi_latus_rectum() const noexcept { return p_; }
  double eccentricity() const noexcept { return ecc_; }
  double axis() const noexcept { return axis_; }
  double energy() const noexcept { return energy_; }
  double angular_momentum() const noexcept { return ang_mom_; }
  double kappa() const noexcept { return kappa_; }
  bool attractive() const noexcept { return kappa_ < 0.0; }
  double periapsis() const noexcept;

  /// Denominator eps cos(theta - axis) + s; the orbit exists where it is positive.
  double denominator(double theta) const noexcept;
  bool defined_at(double theta) const noexcept { return denominator(theta) > 0.0; }
  /// Throws Error(kRange) where the denominator is not positive.
  double radius(double theta) const;
  /// Asymptote angles {incoming, outgoing} for the sense of motion set by sign(L).
  std::pair<double, double> asymptotes() const noexcept;

  /// Full state (position and velocity) at polar angle theta.
  PlanarState state_at(double theta) const;
  /// Time since periapsis passage at theta, from the hyperbolic Kepler equation.
  double time_since_periapsis(double theta) const;
  /// Polar angle on the incoming branch at distance r (r >= periapsis).
  double incoming_angle_at_radius(double r) const;

 private:
  double energy_, ang_mom_, kappa_, axis_, m_;
  double p_, ecc_, ecc_sq_minus_one_;
};

/// The conic in the launch geometry of a beam arriving from the left above the wire
/// (axis pi/2, L = -m v b, E = m v^2 / 2). Throws Error(kRange) if the current is zero.
ConicOrbit conic_orbit(const OrbitParams& params, const PhysicalConstants& consts);
/// Conic through a given state, oriented by its Laplace-Runge-Lenz vector.
ConicOrbit conic_from_state(const PlanarState& s, double kappa, const PhysicalConstants& consts);

struct TrajectorySample {
  double t = 0.0;
  PlanarState state;
  double energy = 0.0;
  double ang_mom = 0.0;
};

/// Time-ordered classical path with per-sample invariants.
struct Trajectory {
  SpinBranch branch = SpinBranch::kPlus;
  double current = 0.0;
  std::vector<TrajectorySample> samples;
  /// Displacement from the launch straight line x0 + v0 t, kept at full relative precision.
  /// Empty for analytic trajectories.
  std::vector<Vec2> deviations;

  std::vector<PlanarState> states() const;
  double max_energy_drift() const noexcept;          // relative to the first sample
  double max_angular_momentum_drift() const noexcept;  // relative to the first sample
};

/// Samples the conic on a monotone theta grid; time is reconstructed from L = m r^2 dtheta/dt
/// (zero at periapsis). Throws Error(kRange) if the grid leaves the conic.
Trajectory analytic_orbit(const ConicOrbit& conic, SpinBranch branch, double current, std::span<const double> theta_grid);
Trajectory analytic_orbit(const OrbitParams& params, const PhysicalConstants& consts, std::span<const double> theta_grid);

/// Initial state for integrate_orbit.
PlanarState launch_state(const OrbitParams& params, const PhysicalConstants& consts);
/// Time to travel from the launch point to the symmetric point downstream.
double default_time_span(const OrbitParams& params, const PhysicalConstants& consts);

struct OrbitTolerances {
  double relative = 1e-12;     // local error control
  double conservation = 1e-9;  // gate on relative drift of E and L
  double max_step = 0.0;       // 0: span / 500
  std::size_t dense_samples = 0;  // >0: uniform-time samples from the dense output instead of step ends
};

/// Integrates m dv/dt = kappa / r^2 e_r from the launch state over [0, t_span] (t_span <= 0: default span).
/// Uses an Encke-type split: the state is the displacement from the free launch motion.
/// Throws Error(kWireCollision) if r <= wire_radius and Error(kTolerance) if E or L drift past the gate.
Trajectory integrate_orbit(const OrbitParams& params, const PhysicalConstants& consts, double t_span = 0.0,
                           const OrbitTolerances& tol = {});

/// Largest |y - y_launch_line| for samples with x in [x_min, x_max], from the stored deviations.
double max_transverse_deviation(const Trajectory& traj, double x_min, double x_max);

struct CurrentWindow {
  double low = 0.0;   // hbar v / (4 C0): adiabatic bound with max|v_theta| = v
  double high = 0.0;  // m v^2 b / C0: straight-line bound
  double ratio() const noexcept { return high / low; }
  bool admits(double margin) const noexcept { return ratio() > margin * margin; }
};

/// Throws Error(kEmptyWindow) if high / low <= margin^2 and Error(kValidation) for bad inputs.
CurrentWindow current_window(double v, double b, const PhysicalConstants& consts, double margin = 1.0);

/// Largest current a round wire carries at the given density limit (A/m^2).
double wire_feasibility(double current_density_limit, double wire_radius);

}  // namespace planarspin
