#include <doctest.h>

#include <cmath>

#include "planarspin/error.hpp"
#include "planarspin/field.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/path.hpp"
#include "planarspin/transport.hpp"
#include "support.hpp"

using namespace planarspin;
using test_support::uniform;

namespace {

const PhysicalConstants kRounded = PhysicalConstants::rounded();

Trajectory nominal_pass(double current, LaunchMode launch = LaunchMode::kHorizontal) {
  OrbitParams p;
  p.current = current;
  p.launch = launch;
  return integrate_orbit(p, kRounded);
}

TransportResult run(const Trajectory& traj, double current, SpinBranch branch, double tol = 1e-10) {
  SpinStepControl c;
  c.tolerance = tol;
  const auto f = local_eigenframe(traj.samples.front().state);
  return propagate_spin(traj, branch == SpinBranch::kPlus ? f.plus : f.minus, current, kRounded, c);
}

}  // namespace

TEST_SUITE("spin_transport") {

TEST_CASE("adiabaticity functional closed form") {
  const auto p = PlanarState::from_cartesian({0.0, -0.1}, {2000.0, 0.0});
  const double expected = kRounded.hbar * 2000.0 / (4 * kRounded.c0() * 400.0);
  CHECK(adiabaticity_functional(p, 400.0, kRounded) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(adiabaticity_functional(p, 400.0, kRounded) == doctest::Approx(0.137).epsilon(5e-3));

  const auto radial = PlanarState::from_cartesian({0.3, 0.4}, {300.0, 400.0});
  CHECK(adiabaticity_functional(radial, 400.0, kRounded) == 0.0);

  // Scaling the position by a power of two is exact in floating point, so r drops out bit for bit.
  const auto near = PlanarState::from_cartesian({0.03, 0.04}, {-300.0, 650.0});
  const auto far8 = PlanarState::from_cartesian({0.24, 0.32}, {-300.0, 650.0});
  const auto far10 = PlanarState::from_cartesian({0.3, 0.4}, {-300.0, 650.0});
  CHECK(adiabaticity_functional(near, 400.0, kRounded) == adiabaticity_functional(far8, 400.0, kRounded));
  CHECK(adiabaticity_functional(near, 400.0, kRounded) ==
        doctest::Approx(adiabaticity_functional(far10, 400.0, kRounded)).epsilon(1e-15));
  CHECK_THROWS_AS(adiabaticity_functional(PlanarState{}, 400.0, kRounded), Error);
}

TEST_CASE("matrix element two ways and the adiabatic quotient") {
  for (int k = 0; k < 300; ++k) {
    const auto p = PlanarState::from_cartesian({uniform(-0.5, 0.5), uniform(-0.5, 0.5)},
                                               {uniform(-3000, 3000), uniform(-3000, 3000)});
    if (p.r < 0.01) continue;
    const double current = test_support::log_uniform(10.0, 1e5);
    const auto m = matrix_element_check(p, current, kRounded);
    CHECK(m.relative_difference < 1e-10);
    CHECK(std::abs(m.closed_form) == doctest::Approx(kRounded.c0() * current * std::abs(p.v_theta()) / (p.r * p.r)));
    CHECK(std::abs(m.diagonal_radial) < 1e-15);
    const double gap = 2 * kRounded.c0() * current / p.r;
    CHECK(m.gap_squared == doctest::Approx(gap * gap).epsilon(1e-10));
    CHECK(m.adiabatic_quotient == doctest::Approx(adiabaticity_functional(p, current, kRounded)).epsilon(1e-10));
  }
  const auto radial = PlanarState::from_cartesian({0.1, 0.0}, {500.0, 0.0});
  CHECK(std::abs(matrix_element_check(radial, 400.0, kRounded).numeric) == 0.0);
}

TEST_CASE("radial ray keeps the eigenstate populations") {
  const PolylineMotion ray({{0.02, 0.01}, {0.4, 0.2}}, 2000.0);
  const auto f = local_eigenframe(std::atan2(0.01, 0.02));
  const auto res = propagate_spin(ray, f.plus, 400.0, kRounded);
  for (double fid : res.fidelity_history) CHECK(fid > 1.0 - 1e-8);
  CHECK(res.adiabaticity_max < 1e-12);
}

TEST_CASE("straight pass follows the eigenstate") {
  const auto traj = nominal_pass(400.0);
  const auto res = run(traj, 400.0, SpinBranch::kPlus);
  CHECK(res.branches[0].final_fidelity >= 0.95);
  CHECK(res.max_norm_error < 1e-10);
  for (double f : res.fidelity_history) {
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
  CHECK(res.adiabaticity_max == doctest::Approx(0.1366).epsilon(1e-3));
}

TEST_CASE("straight pass phase deviation is the quasi-adiabatic energy shift") {
  // Oracle: the dressed levels +-sqrt(E^2 + (hbar thetadot / 2)^2) along a straight line add
  // -int (sqrt(w^2/4 + thetadot^2/4) - w/2) dt to the phase of the tracked branch.
  const double v = 2000.0, b = 0.1;
  for (double current : {400.0, 4000.0}) {
    CAPTURE(current);
    const auto traj = nominal_pass(current);
    const auto res = run(traj, current, SpinBranch::kPlus);
    const double half_sweep = line_integral_connection(std::span<const PlanarState>(traj.states()));
    const double deviation = wrap_pi(res.geometric_phase - half_sweep);

    const double x0 = traj.samples.front().state.x, x1 = traj.samples.back().state.x;
    const double shift = -test_support::integrate(
        [&](double x) {
          const double r2 = x * x + b * b;
          const double w = 2 * kRounded.c0() * current / (kRounded.hbar * std::sqrt(r2));
          const double thetadot = v * b / r2;
          return (std::sqrt(0.25 * w * w + 0.25 * thetadot * thetadot) - 0.5 * w) / v;
        },
        x0, x1);
    CHECK(deviation == doctest::Approx(shift).epsilon(0.05));
    if (current == 4000.0) CHECK(std::abs(deviation) < 0.05);
  }
}

TEST_CASE("fidelity converges to one as the current grows") {
  // Reference: the same propagation at a hundredfold tighter tolerance.
  const auto traj = nominal_pass(400.0);
  double previous = 0.0;
  for (double current : {4.0, 400.0, 40000.0}) {
    CAPTURE(current);
    const double f = run(traj, current, SpinBranch::kPlus).branches[0].final_fidelity;
    const double ref = run(traj, current, SpinBranch::kPlus, 1e-12).branches[0].final_fidelity;
    CHECK(f == doctest::Approx(ref).epsilon(1e-6));
    CHECK(f > previous);
    previous = f;
  }
  CHECK(previous > 1.0 - 1e-4);
}

TEST_CASE("both branches share the fidelity history") {
  const auto traj = nominal_pass(400.0);
  const auto plus = run(traj, 400.0, SpinBranch::kPlus);
  const auto minus = run(traj, 400.0, SpinBranch::kMinus);
  REQUIRE(plus.fidelity_history.size() == minus.fidelity_history.size());
  for (std::size_t i = 0; i < plus.fidelity_history.size(); ++i)
    CHECK(std::abs(plus.fidelity_history[i] - minus.fidelity_history[i]) < 1e-8);
  CHECK(plus.branches[0].dynamical_phase == doctest::Approx(-minus.branches[1].dynamical_phase).epsilon(1e-12));
}

TEST_CASE("closed loop phase converges to the line integral") {
  const double radius = 0.1, v = 2000.0;
  double previous = 10.0, scaled = 0.0;
  for (double current : {40.0, 400.0, 4000.0, 40000.0}) {
    const CircularMotion circle(radius, v);
    const auto res = propagate_spin(circle, local_eigenframe(0.0).plus, current, kRounded);
    const double err = std::abs(wrap_pi(res.geometric_phase - (-kPi)));
    CAPTURE(current);
    CHECK(err < previous);
    CHECK(res.max_norm_error < 1e-10);
    previous = err;
    if (current >= 4000.0) {
      // First-order residual: (pi / 2) (v / R) / omega, falling as 1/I.
      if (scaled > 0.0) CHECK(err * current == doctest::Approx(scaled).epsilon(0.05));
      scaled = err * current;
    }
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("equal superposition has no tracked branch") {
  const auto traj = nominal_pass(400.0);
  const auto f = local_eigenframe(traj.samples.front().state);
  const Spinor mix = (1.0 / std::sqrt(2.0)) * (f.plus + f.minus);
  const auto res = propagate_spin(traj, mix, 400.0, kRounded);
  CHECK_FALSE(res.tracked_branch.has_value());
  CHECK(res.fidelity_history.empty());
  CHECK(std::isnan(res.geometric_phase));
  CHECK(res.branches[0].final_fidelity > 0.95);
  CHECK(res.max_norm_error < 1e-10);
}

TEST_CASE("profile peaks at closest approach and scales with 1/I") {
  const auto traj = nominal_pass(400.0, LaunchMode::kAsymptotic);
  const auto a = adiabatic_profile(traj, 400.0, kRounded);
  const auto b = adiabatic_profile(traj, 4000.0, kRounded);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].value == doctest::Approx(10.0 * b[i].value).epsilon(1e-14));
    if (a[i].value > a[peak].value) peak = i;
  }
  double r_min = 1.0;
  for (const auto& s : traj.samples) r_min = std::min(r_min, s.state.r);
  CHECK(traj.samples[peak].state.r == r_min);

  const double low = current_window(2000.0, 0.1, kRounded).low;
  double top = 0.0;
  for (const auto& p : adiabatic_profile(traj, low, kRounded)) top = std::max(top, p.value);
  CHECK(top == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(top <= 1.0);
}

TEST_CASE("gap along the trajectory") {
  const auto traj = nominal_pass(400.0);
  for (std::size_t i = 0; i < traj.samples.size(); i += 17) {
    const auto& s = traj.samples[i].state;
    const auto ev = hermitian_eigenvalues(zeeman_hamiltonian(s, 400.0, kRounded));
    const double gap = ev[1] - ev[0];
    const double expected = 2 * kRounded.c0() * 400.0 / s.r;
    CHECK(gap * gap == doctest::Approx(expected * expected).epsilon(1e-10));
  }
}

TEST_CASE("propagation errors") {
  const PolylineMotion through({{-0.1, 0.001}, {0.1, 0.001}}, 2000.0);
  try {
    propagate_spin(through, Spinor{}, 400.0, kRounded);
    FAIL("expected a singularity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSingularity);
  }
  SpinStepControl tiny;
  tiny.max_steps = 5;
  try {
    propagate_spin(nominal_pass(400.0), Spinor{}, 400.0, kRounded, tiny);
    FAIL("expected a step failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kStepFailure);
  }
}

}  // TEST_SUITE
