#include "planarspin/field.hpp"

#include <cmath>
#include <string>

#include "planarspin/error.hpp"

namespace planarspin {
namespace {

void require_off_axis(const PlanarState& p) {
  if (!(p.r > 0.0)) throw Error(ErrorKind::kSingularity, "field is singular at the wire (r = 0)");
}

void require_current(double current) {
  if (!(current > 0.0)) throw Error(ErrorKind::kValidation, "wire current must be positive");
}

}  // namespace

Vec2 magnetic_field(const PlanarState& p, double current, const PhysicalConstants& consts) {
  require_off_axis(p);
  require_current(current);
  const double magnitude = consts.mu0 * current / (2.0 * kPi * p.r);
  // e_theta from Cartesian data so that the direction does not depend on how theta was unwound.
  return magnitude * Vec2{-p.y / p.r, p.x / p.r};
}

Mat2 sigma_azimuthal(double theta) noexcept {
  // -sin sigma_x + cos sigma_y = [[0, -i e^{-i theta}], [i e^{i theta}, 0]]
  const Complex phase = std::polar(1.0, theta);
  return {0.0, Complex(0.0, -1.0) * std::conj(phase), Complex(0.0, 1.0) * phase, 0.0};
}

Mat2 sigma_radial(double theta) noexcept {
  // cos sigma_x + sin sigma_y = [[0, e^{-i theta}], [e^{i theta}, 0]]
  const Complex phase = std::polar(1.0, theta);
  return {0.0, std::conj(phase), phase, 0.0};
}

Mat2 zeeman_hamiltonian(const PlanarState& p, double current, const PhysicalConstants& consts) {
  const Vec2 b = magnetic_field(p, current, consts);
  // -(mu/2)(B_x sigma_x + B_y sigma_y)
  const double s = -0.5 * consts.mu;
  return Complex(s * b.x, 0.0) * Mat2::pauli_x() + Complex(s * b.y, 0.0) * Mat2::pauli_y();
}

std::array<double, 2> zeeman_levels(const PlanarState& p, double current, const PhysicalConstants& consts) {
  require_off_axis(p);
  require_current(current);
  const double level = consts.c0() * current / p.r;
  return {level, -level};
}

Eigenframe local_eigenframe(double theta) noexcept {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex rot = Complex(0.0, 1.0) * std::polar(1.0, theta);  // i e^{i theta}
  return {{s, s * rot}, {s, -s * rot}};
}

Eigenframe local_eigenframe(double theta, const Gauge& gauge) {
  Eigenframe f = local_eigenframe(theta);
  const Complex phase = std::polar(1.0, gauge.chi(theta));
  return {phase * f.plus, phase * f.minus};
}

Vec2 berry_connection(const PlanarState& p) {
  require_off_axis(p);
  return (-0.5 / p.r) * Vec2{-p.y / p.r, p.x / p.r};
}

Vec2 berry_connection(const PlanarState& p, const Gauge& gauge) {
  require_off_axis(p);
  return (-(0.5 + gauge.dchi(p.theta)) / p.r) * Vec2{-p.y / p.r, p.x / p.r};
}

}  // namespace planarspin
