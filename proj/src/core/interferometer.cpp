#include "planarspin/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "planarspin/error.hpp"

namespace planarspin {
namespace {

Vec2 reflect_across(Vec2 v, Vec2 a, Vec2 b) noexcept {
  const Vec2 d = (b - a) / norm(b - a);
  const Vec2 rel = v - a;
  const Vec2 along = dot(rel, d) * d;
  return a + along - (rel - along);
}

double distance_to_line(Vec2 v, Vec2 a, Vec2 b) noexcept {
  return std::abs(cross(b - a, v - a)) / norm(b - a);
}

/// int ds / r along the segment [a, b] (wire frame), closed form.
double inverse_radius_integral(Vec2 a, Vec2 b) noexcept {
  const double len = norm(b - a);
  if (len == 0.0) return 0.0;
  const Vec2 u = (b - a) / len;
  const double s0 = -dot(a, u);        // parameter of the closest point on the line
  const double d = std::abs(cross(a, u));  // distance of the line from the wire
  return std::asinh((len - s0) / d) - std::asinh(-s0 / d);
}

/// Peak |v_theta| / v along a polyline: d / r_min per segment.
double peak_azimuthal_fraction(std::span<const Vec2> arm) noexcept {
  double peak = 0.0;
  for (std::size_t i = 0; i + 1 < arm.size(); ++i) {
    const Vec2 d = arm[i + 1] - arm[i];
    const double len = norm(d);
    if (len == 0.0) continue;
    const double line_distance = std::abs(cross(arm[i], d / len));
    peak = std::max(peak, line_distance / segment_distance_to_origin(arm[i], arm[i + 1]));
  }
  return peak;
}

ArmPhaseBudget budget_without_geometric(std::span<const Vec2> arm, double v, double current,
                                        const PhysicalConstants& consts, double wire_radius) {
  if (!(v > 0.0)) throw Error(ErrorKind::kValidation, "arm traversal speed must be positive");
  if (!(current > 0.0)) throw Error(ErrorKind::kValidation, "wire current must be positive");
  if (arm.size() < 2) throw Error(ErrorKind::kGeometry, "an arm needs at least two vertices");
  ArmPhaseBudget out;
  double inverse_radius = 0.0;
  for (std::size_t i = 0; i + 1 < arm.size(); ++i) {
    if (segment_distance_to_origin(arm[i], arm[i + 1]) <= wire_radius)
      throw Error(ErrorKind::kSingularity, "arm passes through the wire exclusion disk");
    inverse_radius += inverse_radius_integral(arm[i], arm[i + 1]);
  }
  const double phase = consts.c0() * current / (consts.hbar * v) * inverse_radius;
  out.dynamical = {-phase, phase};
  out.length = path_length(arm);
  out.transit_time = out.length / v;
  return out;
}

/// e^{i Phi_+}|+><+| + e^{i Phi_-}|-><-| written as e^{i mean}(cos(half) 1 + i sin(half) sigma_theta),
/// which is exactly a multiple of the identity when the two phases agree.
Mat2 diagonal_in_frame(double theta, const std::array<double, 2>& phases) {
  const double mean = 0.5 * (phases[0] + phases[1]);
  const double half = 0.5 * (phases[0] - phases[1]);
  const Mat2 body = Complex(std::cos(half), 0.0) * Mat2::identity() + Complex(0.0, std::sin(half)) * sigma_azimuthal(theta);
  return std::polar(1.0, mean) * body;
}

LoopEvolution assemble_loop(const InterferometerGeometry& g, ArmPhaseBudget up, ArmPhaseBudget down) {
  LoopEvolution out;
  out.up = up;
  out.down = down;
  out.loop_geometric = down.geometric - up.geometric;
  for (std::size_t b = 0; b < 2; ++b) {
    out.dynamical_mismatch[b] = down.dynamical[b] - up.dynamical[b];
    out.branch_phase[b] = out.loop_geometric + out.dynamical_mismatch[b];
  }
  const Vec2 p = g.p - g.wire_position;
  out.unitary = diagonal_in_frame(std::atan2(p.y, p.x), out.branch_phase);
  out.winding = g.winding();
  return out;
}

}  // namespace

bool InterferometerGeometry::symmetric(double tol) const {
  const double scale = norm(q - p);
  if (arm_up.size() != arm_down.size()) return false;
  for (std::size_t i = 0; i < arm_up.size(); ++i)
    if (norm(reflect_across(arm_up[i], p, q) - arm_down[i]) > tol * scale) return false;
  return distance_to_line(wire_position, p, q) <= tol * scale;
}

Polyline InterferometerGeometry::loop() const {
  Polyline out(arm_down.begin(), arm_down.end());
  for (auto it = arm_up.rbegin() + 1; it != arm_up.rend(); ++it) out.push_back(*it);
  return out;
}

int InterferometerGeometry::winding() const {
  return winding_number(relative_to(loop(), wire_position), wire_radius);
}

InterferometerGeometry make_geometry(Polyline arm_up, Polyline arm_down, Vec2 wire_position, double wire_radius) {
  if (arm_up.size() < 2 || arm_down.size() < 2) throw Error(ErrorKind::kGeometry, "arms need at least two vertices");
  if (!(wire_radius >= 0.0)) throw Error(ErrorKind::kValidation, "wire radius must be non-negative");
  if (!(arm_up.front() == arm_down.front()) || !(arm_up.back() == arm_down.back()))
    throw Error(ErrorKind::kGeometry, "arms must share the crossing points P and Q");
  InterferometerGeometry g;
  g.p = arm_up.front();
  g.q = arm_up.back();
  if (g.p == g.q) throw Error(ErrorKind::kGeometry, "crossing points P and Q coincide");
  g.wire_position = wire_position;
  g.wire_radius = wire_radius;
  for (const Polyline* arm : {&arm_up, &arm_down}) {
    for (std::size_t i = 0; i + 1 < arm->size(); ++i) {
      const double d = segment_distance_to_origin((*arm)[i] - wire_position, (*arm)[i + 1] - wire_position);
      if (d <= wire_radius) {
        std::ostringstream os;
        os << "interferometer arm passes within " << d << " m of the wire (radius " << wire_radius << " m)";
        throw Error(ErrorKind::kGeometry, os.str());
      }
    }
  }
  auto farthest = [&](const Polyline& arm) {
    return *std::max_element(arm.begin(), arm.end(), [&](Vec2 a, Vec2 b) {
      return distance_to_line(a, g.p, g.q) < distance_to_line(b, g.p, g.q);
    });
  };
  g.mirror_up = farthest(arm_up);
  g.mirror_down = farthest(arm_down);
  g.arm_up = std::move(arm_up);
  g.arm_down = std::move(arm_down);
  return g;
}

InterferometerGeometry build_geometry(double arm_half_length, double height_up, double height_down, Vec2 wire_offset,
                                      double wire_radius) {
  if (!(arm_half_length > 0.0) || !(height_up > 0.0) || !(height_down > 0.0))
    throw Error(ErrorKind::kValidation, "interferometer dimensions must be positive");
  const Vec2 p{-arm_half_length, 0.0};
  const Vec2 q{arm_half_length, 0.0};
  return make_geometry({p, {0.0, height_up}, q}, {p, {0.0, -height_down}, q}, wire_offset, wire_radius);
}

InterferometerGeometry build_geometry(double arm_half_length, double arm_height, Vec2 wire_offset, double wire_radius) {
  return build_geometry(arm_half_length, arm_height, arm_height, wire_offset, wire_radius);
}

ArmPhaseBudget arm_phase_budget(std::span<const Vec2> arm, double v, double current, const PhysicalConstants& consts,
                                double wire_radius) {
  ArmPhaseBudget out = budget_without_geometric(arm, v, current, consts, wire_radius);
  out.geometric = line_integral_connection(arm, wire_radius);
  return out;
}

ArmPhaseBudget arm_phase_budget(std::span<const Vec2> arm, double v, double current, const PhysicalConstants& consts,
                                const Gauge& gauge, double wire_radius) {
  ArmPhaseBudget out = budget_without_geometric(arm, v, current, consts, wire_radius);
  out.geometric = line_integral_connection(arm, gauge, wire_radius);
  return out;
}

LoopEvolution loop_unitary(const InterferometerGeometry& geometry, double current, double v,
                           const PhysicalConstants& consts) {
  const Polyline up = geometry.arm_up_wire_frame();
  const Polyline down = geometry.arm_down_wire_frame();
  return assemble_loop(geometry, arm_phase_budget(up, v, current, consts, geometry.wire_radius),
                       arm_phase_budget(down, v, current, consts, geometry.wire_radius));
}

LoopEvolution loop_unitary(const InterferometerGeometry& geometry, double current, double v,
                           const PhysicalConstants& consts, const Gauge& gauge) {
  const Polyline up = geometry.arm_up_wire_frame();
  const Polyline down = geometry.arm_down_wire_frame();
  return assemble_loop(geometry, arm_phase_budget(up, v, current, consts, gauge, geometry.wire_radius),
                       arm_phase_budget(down, v, current, consts, gauge, geometry.wire_radius));
}

InterferenceOutcome detector_intensities(const DensityMatrix& rho, const Mat2& u) {
  if (!u.is_unitary(1e-10)) throw Error(ErrorKind::kNonUnitary, "loop operator is not unitary");
  InterferenceOutcome out;
  out.loop_unitary = u;
  out.trace_rho_u = (rho.matrix() * u).trace();
  out.visibility = std::abs(out.trace_rho_u);
  out.loop_phase = out.visibility > 0.0 ? wrap_two_pi(std::arg(out.trace_rho_u)) : 0.0;
  out.intensity_d1 = std::clamp(0.5 * (1.0 + out.trace_rho_u.real()), 0.0, 1.0);
  out.intensity_d2 = 1.0 - out.intensity_d1;
  return out;
}

InterferenceOutcome full_experiment(const InterferometerGeometry& geometry, double current, double v,
                                    const DensityMatrix& rho, const PhysicalConstants& consts, ExperimentMode mode,
                                    const ExperimentOptions& options) {
  const LoopEvolution loop = loop_unitary(geometry, current, v, consts);
  const Polyline up = geometry.arm_up_wire_frame();
  const Polyline down = geometry.arm_down_wire_frame();

  InterferenceOutcome out;
  double adiabaticity = 0.0;
  if (mode == ExperimentMode::kAnalytic) {
    out = detector_intensities(rho, loop.unitary);
    const double peak_fraction = std::max(peak_azimuthal_fraction(up), peak_azimuthal_fraction(down));
    adiabaticity = consts.hbar * v * peak_fraction / (4.0 * consts.c0() * current);
  } else {
    SpinStepControl control = options.spin;
    control.record_history = false;
    control.wire_radius = geometry.wire_radius;
    const Spinor probe{};
    const TransportResult ru = propagate_spin(PolylineMotion(up, v), probe, current, consts, control);
    const TransportResult rd = propagate_spin(PolylineMotion(down, v), probe, current, consts, control);
    out = detector_intensities(rho, ru.propagator.adjoint() * rd.propagator);
    adiabaticity = std::max(ru.adiabaticity_max, rd.adiabaticity_max);
  }
  out.mode = mode;
  out.loop_phase = wrap_two_pi(loop.loop_geometric);
  out.adiabaticity_max = adiabaticity;
  if (adiabaticity > options.adiabaticity_threshold) {
    std::ostringstream os;
    os << "adiabaticity functional peaks at " << adiabaticity << ", above the threshold "
       << options.adiabaticity_threshold;
    out.warnings.push_back(os.str());
  }
  return out;
}

}  // namespace planarspin
