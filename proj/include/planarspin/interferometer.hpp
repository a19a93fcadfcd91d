#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "planarspin/constants.hpp"
#include "planarspin/field.hpp"
#include "planarspin/path.hpp"
#include "planarspin/spin.hpp"
#include "planarspin/transport.hpp"

namespace planarspin {

/// Two-arm loop of a triple-Laue interferometer: splitter crossing P, mirror vertices,
/// recombination crossing Q. Points are in the lab frame; the wire sits at `wire_position`.
struct InterferometerGeometry {
  Vec2 p, q;
  Vec2 mirror_up, mirror_down;
  Vec2 wire_position;
  double wire_radius = kDefaultWireRadius;
  Polyline arm_up;    // P -> ... -> Q
  Polyline arm_down;  // P -> ... -> Q

  /// arm_down mirrors arm_up across the line PQ and the wire lies on that line.
  bool symmetric(double tol = 1e-12) const;
  /// Counterclockwise (for a wire below arm_up) loop P -> arm_down -> Q -> arm_up reversed -> P.
  Polyline loop() const;
  Polyline arm_up_wire_frame() const { return relative_to(arm_up, wire_position); }
  Polyline arm_down_wire_frame() const { return relative_to(arm_down, wire_position); }
  int winding() const;
};

/// P = (-a, 0), Q = (a, 0), M_up = (0, h), M_down = (0, -h); wire at `wire_offset`.
/// Throws Error(kGeometry) if an arm enters the wire disk, Error(kValidation) for bad sizes.
InterferometerGeometry build_geometry(double arm_half_length, double arm_height, Vec2 wire_offset = {},
                                      double wire_radius = kDefaultWireRadius);
/// Same with separate arm heights (h_down > 0 measured downwards).
InterferometerGeometry build_geometry(double arm_half_length, double height_up, double height_down, Vec2 wire_offset,
                                      double wire_radius);
/// General arms sharing end points P and Q.
InterferometerGeometry make_geometry(Polyline arm_up, Polyline arm_down, Vec2 wire_position,
                                     double wire_radius = kDefaultWireRadius);

struct ArmPhaseBudget {
  double geometric = 0.0;               // integral of A . dr from P to Q (gauge dependent)
  std::array<double, 2> dynamical{};    // -(1/hbar) int E_b dt, by branch_index
  double transit_time = 0.0;
  double length = 0.0;
};

/// Phase budget of one arm (wire frame) traversed at constant speed v.
ArmPhaseBudget arm_phase_budget(std::span<const Vec2> arm, double v, double current, const PhysicalConstants& consts,
                                double wire_radius = kDefaultWireRadius);
ArmPhaseBudget arm_phase_budget(std::span<const Vec2> arm, double v, double current, const PhysicalConstants& consts,
                                const Gauge& gauge, double wire_radius = kDefaultWireRadius);

/// Adiabatic loop operator acting on the spin at P, U = sum_b e^{i Phi_b} |b;P><b;P| with
/// Phi_b = (geometric + dynamical)_down - (geometric + dynamical)_up.
struct LoopEvolution {
  Mat2 unitary;
  double loop_geometric = 0.0;              // counterclockwise-ordered loop integral (signed)
  std::array<double, 2> dynamical_mismatch{};  // down minus up, by branch_index
  std::array<double, 2> branch_phase{};        // Phi_b
  ArmPhaseBudget up, down;
  int winding = 0;
};

LoopEvolution loop_unitary(const InterferometerGeometry& geometry, double current, double v,
                           const PhysicalConstants& consts);
LoopEvolution loop_unitary(const InterferometerGeometry& geometry, double current, double v,
                           const PhysicalConstants& consts, const Gauge& gauge);

enum class ExperimentMode { kAnalytic, kPropagated };

struct InterferenceOutcome {
  ExperimentMode mode = ExperimentMode::kAnalytic;
  double loop_phase = 0.0;  // loop Berry phase reduced to [0, 2 pi)
  Mat2 loop_unitary;
  Complex trace_rho_u;
  double intensity_d1 = 0.0;  // normalized to the incoming intensity
  double intensity_d2 = 0.0;
  double visibility = 0.0;    // |Tr(rho U)|
  double adiabaticity_max = 0.0;
  std::vector<std::string> warnings;
};

/// I_D1 = (1 + Re Tr(rho U)) / 2, I_D2 = 1 - I_D1 for the ideal 50:50 recombiner.
/// Throws Error(kNonUnitary) unless U is unitary to 1e-10.
InterferenceOutcome detector_intensities(const DensityMatrix& rho, const Mat2& u);

struct ExperimentOptions {
  SpinStepControl spin;
  double adiabaticity_threshold = 0.2;
};

/// Whole pipeline. Analytic mode uses loop_unitary; propagated mode composes the full spin
/// propagators of both arms, U = U_up^dagger U_down.
InterferenceOutcome full_experiment(const InterferometerGeometry& geometry, double current, double v,
                                    const DensityMatrix& rho, const PhysicalConstants& consts, ExperimentMode mode,
                                    const ExperimentOptions& options = {});

}  // namespace planarspin
