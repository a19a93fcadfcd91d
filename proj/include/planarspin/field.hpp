#pragma once

#include <array>
#include <functional>

#include "planarspin/constants.hpp"
#include "planarspin/planar.hpp"
#include "planarspin/spin.hpp"

namespace planarspin {

/// Field of an infinitely long straight wire along z: B = mu0 I / (2 pi r) e_theta.
/// Throws Error(kSingularity) at r = 0 and Error(kValidation) for I <= 0.
Vec2 magnetic_field(const PlanarState& p, double current, const PhysicalConstants& consts);

/// Zeeman Hamiltonian H = -(mu/2) sigma . B = (C0 I / r) sigma_theta in the sigma_z basis.
Mat2 zeeman_hamiltonian(const PlanarState& p, double current, const PhysicalConstants& consts);

/// Local Zeeman levels {E_+, E_-} = {+C0 I / r, -C0 I / r}.
std::array<double, 2> zeeman_levels(const PlanarState& p, double current, const PhysicalConstants& consts);

/// sigma_theta = e_theta . sigma = -sin(theta) sigma_x + cos(theta) sigma_y.
Mat2 sigma_azimuthal(double theta) noexcept;
/// sigma_r = e_r . sigma = cos(theta) sigma_x + sin(theta) sigma_y.
Mat2 sigma_radial(double theta) noexcept;

/// Smooth phase convention for the local eigenstates. The fixed gauge used everywhere is
///   |+-; theta> = (|up> +- i e^{i theta} |down>) / sqrt(2),
/// whose Berry connection is i<+-|grad|+-> = -e_theta / (2 r) for both branches. A Gauge
/// multiplies both states by e^{i chi(theta)}; chi must be 2 pi periodic.
struct Gauge {
  std::function<double(double)> chi;
  std::function<double(double)> dchi;  // d chi / d theta
};

struct Eigenframe {
  Spinor plus;   // eigenvalue +C0 I / r, Bloch vector +e_theta
  Spinor minus;  // eigenvalue -C0 I / r, Bloch vector -e_theta
};

Eigenframe local_eigenframe(double theta) noexcept;
Eigenframe local_eigenframe(double theta, const Gauge& gauge);
inline Eigenframe local_eigenframe(const PlanarState& p) noexcept { return local_eigenframe(p.theta); }

/// Berry connection A = -e_theta / (2 r) in the fixed gauge, identical for both branches.
Vec2 berry_connection(const PlanarState& p);
/// Connection in a re-fixed gauge: A - grad chi = -(1/2 + chi'(theta)) e_theta / r.
Vec2 berry_connection(const PlanarState& p, const Gauge& gauge);

}  // namespace planarspin
