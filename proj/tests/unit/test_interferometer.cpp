#include <doctest.h>

#include <cmath>

#include "planarspin/error.hpp"
#include "planarspin/interferometer.hpp"
#include "support.hpp"

using namespace planarspin;
using test_support::uniform;

namespace {

const PhysicalConstants kRounded = PhysicalConstants::rounded();

double dist_to_identity(const Mat2& u, double sign) { return (u - Complex(sign) * Mat2::identity()).max_abs(); }

/// Arm with random intermediate vertices between P and Q, kept on one side of the x axis.
Polyline random_arm(double a, double side) {
  Polyline arm{{-a, 0.0}};
  const int n = 2 + static_cast<int>(uniform(0, 3));
  for (int i = 1; i <= n; ++i) arm.push_back({-a + 2 * a * i / (n + 1) + uniform(-0.02, 0.02), side * uniform(0.03, 0.2)});
  arm.push_back({a, 0.0});
  return arm;
}

}  // namespace

TEST_SUITE("interferometer") {

TEST_CASE("symmetric geometry around the wire") {
  const auto g = build_geometry(0.2, 0.1);
  CHECK(g.symmetric());
  CHECK(g.winding() == 1);
  CHECK(g.p == Vec2{-0.2, 0.0});
  CHECK(g.q == Vec2{0.2, 0.0});
  const auto loop = g.loop();
  CHECK(is_closed(loop));
  CHECK(line_integral_connection(relative_to(loop, g.wire_position)) == doctest::Approx(-kPi).epsilon(1e-15));

  const auto shifted = build_geometry(0.2, 0.1, {0.05, 0.0});
  CHECK(shifted.symmetric());
  const auto lifted = build_geometry(0.2, 0.1, {0.0, 0.03});
  CHECK_FALSE(lifted.symmetric());
  CHECK(build_geometry(0.2, 0.1, {0.6, 0.0}).winding() == 0);
}

TEST_CASE("geometry errors") {
  try {
    build_geometry(0.2, 0.1, {0.0, 0.1});
    FAIL("expected a geometry error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGeometry);
  }
  CHECK_THROWS_AS(build_geometry(-0.2, 0.1), Error);
  const Polyline up{{-0.2, 0}, {0, 0.1}, {0.2, 0}}, down{{-0.2, 0}, {0, -0.1}, {0.3, 0}};
  CHECK_THROWS_AS(make_geometry(up, down, Vec2{}), Error);
}

TEST_CASE("arm phase budgets agree with quadrature") {
  for (int k = 0; k < 10; ++k) {
    const auto up = random_arm(0.2, 1.0);
    const double v = uniform(500, 3000), current = test_support::log_uniform(10, 1e4);
    const auto budget = arm_phase_budget(up, v, current, kRounded);
    const double dyn = -kRounded.c0() * current / (kRounded.hbar * v) * test_support::quad_inverse_distance(up);
    CHECK(budget.dynamical[0] == doctest::Approx(dyn).epsilon(1e-10));
    CHECK(budget.dynamical[1] == doctest::Approx(-dyn).epsilon(1e-10));
    CHECK(budget.geometric == doctest::Approx(test_support::quad_connection(up)).epsilon(1e-10));
    CHECK(budget.transit_time == doctest::Approx(path_length(up) / v).epsilon(1e-14));
  }
}

TEST_CASE("symmetric loop operator is minus identity") {
  const auto g = build_geometry(0.2, 0.1);
  for (double current : {10.0, 400.0, 1e4}) {
    const auto l = loop_unitary(g, current, 2000.0, kRounded);
    CHECK(dist_to_identity(l.unitary, -1.0) < 1e-15);
    CHECK(l.loop_geometric == doctest::Approx(-kPi).epsilon(1e-15));
    CHECK(std::abs(l.dynamical_mismatch[0]) < 1e-12);
    CHECK(std::abs(l.dynamical_mismatch[1]) < 1e-12);
  }
  const auto outside = build_geometry(0.2, 0.1, {0.6, 0.0});
  CHECK(dist_to_identity(loop_unitary(outside, 400.0, 2000.0, kRounded).unitary, 1.0) < 1e-12);
}

TEST_CASE("asymmetric loop against independent phases") {
  const auto g = build_geometry(0.2, 0.12, 0.08, {0.01, 0.02}, kDefaultWireRadius);
  const double current = 400.0, v = 2000.0;
  const auto l = loop_unitary(g, current, v, kRounded);
  const double k = kRounded.c0() * current / (kRounded.hbar * v);
  const double mismatch = -k * (test_support::quad_inverse_distance(g.arm_down_wire_frame()) -
                                test_support::quad_inverse_distance(g.arm_up_wire_frame()));
  CHECK(l.dynamical_mismatch[0] == doctest::Approx(mismatch).epsilon(1e-10));
  CHECK(l.dynamical_mismatch[1] == doctest::Approx(-mismatch).epsilon(1e-10));
  // Unpolarized contrast: I_D1 = (1 + (cos Phi_+ + cos Phi_-) / 2) / 2 with Phi = -pi +- mismatch.
  const double expected = 0.5 * (1 + 0.5 * (std::cos(-kPi + mismatch) + std::cos(-kPi - mismatch)));
  const auto out = detector_intensities(DensityMatrix::unpolarized(), l.unitary);
  CHECK(out.intensity_d1 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("detector intensities") {
  const auto rho = DensityMatrix::unpolarized();
  auto d1 = [&](const Mat2& u) { return detector_intensities(rho, u).intensity_d1; };
  CHECK(d1(Complex(-1.0) * Mat2::identity()) == 0.0);
  CHECK(d1(Mat2::identity()) == 1.0);
  CHECK(d1(Mat2::diagonal(Complex(0, 1), Complex(0, -1))) == doctest::Approx(0.5));
  const auto out = detector_intensities(DensityMatrix::pure({1.0, 0.0}), Mat2::diagonal(1.0, -1.0));
  CHECK(out.intensity_d1 == 1.0);
  CHECK(out.visibility == 1.0);
  try {
    detector_intensities(rho, Complex(1.01) * Mat2::identity());
    FAIL("expected a non-unitary error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonUnitary);
  }
}

TEST_CASE("unpolarized outcome is the average of pure ones") {
  const auto g = build_geometry(0.2, 0.11, 0.09, {0.0, 0.01}, kDefaultWireRadius);
  for (auto mode : {ExperimentMode::kAnalytic, ExperimentMode::kPropagated}) {
    const auto mixed = full_experiment(g, 400.0, 2000.0, DensityMatrix::unpolarized(), kRounded, mode);
    const auto f = local_eigenframe(kPi);
    const double a = full_experiment(g, 400.0, 2000.0, DensityMatrix::pure(f.plus), kRounded, mode).intensity_d1;
    const double b = full_experiment(g, 400.0, 2000.0, DensityMatrix::pure(f.minus), kRounded, mode).intensity_d1;
    const double c = full_experiment(g, 400.0, 2000.0, DensityMatrix::pure({1, 0}), kRounded, mode).intensity_d1;
    const double d = full_experiment(g, 400.0, 2000.0, DensityMatrix::pure({0, 1}), kRounded, mode).intensity_d1;
    CHECK(mixed.intensity_d1 == doctest::Approx(0.5 * (a + b)).epsilon(1e-12));
    CHECK(mixed.intensity_d1 == doctest::Approx(0.5 * (c + d)).epsilon(1e-12));
    CHECK(std::abs(mixed.intensity_d1 + mixed.intensity_d2 - 1.0) <= 1e-12);
  }
}

TEST_CASE("nominal interference") {
  const auto g = build_geometry(0.2, 0.1);
  const auto rho = DensityMatrix::unpolarized();
  const auto analytic = full_experiment(g, 400.0, 2000.0, rho, kRounded, ExperimentMode::kAnalytic);
  CHECK(analytic.intensity_d1 == 0.0);
  CHECK(analytic.loop_phase == doctest::Approx(kPi));
  const auto low = full_experiment(g, 400.0, 2000.0, rho, kRounded, ExperimentMode::kPropagated);
  const auto high = full_experiment(g, 4000.0, 2000.0, rho, kRounded, ExperimentMode::kPropagated);
  CHECK(low.intensity_d1 < 0.05);
  CHECK(high.intensity_d1 < low.intensity_d1);
  CHECK(low.warnings.empty());
  const auto slow = full_experiment(g, 40.0, 2000.0, rho, kRounded, ExperimentMode::kAnalytic);
  CHECK_FALSE(slow.warnings.empty());

  const auto outside = build_geometry(0.2, 0.1, {0.6, 0.0});
  CHECK(full_experiment(outside, 400.0, 2000.0, rho, kRounded, ExperimentMode::kAnalytic).intensity_d1 ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("loop phase is robust to arm deformations") {
  for (int k = 0; k < 10; ++k) {
    const auto g = make_geometry(random_arm(0.2, 1.0), random_arm(0.2, -1.0), {uniform(-0.1, 0.1), 0.0});
    const auto l = loop_unitary(g, 400.0, 2000.0, kRounded);
    CHECK(l.winding == 1);
    CHECK(std::abs(wrap_pi(l.loop_geometric + kPi)) < 1e-8);
  }
}

TEST_CASE("loop observables are gauge invariant") {
  const Gauge gauge{[](double t) { return 0.7 * std::sin(t) - 0.2 * std::cos(3 * t); },
                    [](double t) { return 0.7 * std::cos(t) + 0.6 * std::sin(3 * t); }};
  const auto g = build_geometry(0.2, 0.12, 0.08, {0.01, 0.02}, kDefaultWireRadius);
  const auto plain = loop_unitary(g, 400.0, 2000.0, kRounded);
  const auto gauged = loop_unitary(g, 400.0, 2000.0, kRounded, gauge);
  CHECK((plain.unitary - gauged.unitary).max_abs() < 1e-12);
  CHECK(gauged.loop_geometric == doctest::Approx(plain.loop_geometric).epsilon(1e-12));
}

TEST_CASE("dynamical mismatch grows with the wire offset") {
  double previous = -1.0;
  for (double y = 0.0; y <= 0.05 + 1e-12; y += 0.005) {
    const auto l = loop_unitary(build_geometry(0.2, 0.1, {0.0, y}), 400.0, 2000.0, kRounded);
    const double m = std::abs(l.dynamical_mismatch[0]);
    if (y == 0.0) CHECK(m == 0.0);
    CHECK(m > previous);
    previous = m;
  }
}

}  // TEST_SUITE
