#include <doctest.h>

#include <cmath>

#include "planarspin/constants.hpp"
#include "planarspin/error.hpp"
#include "planarspin/field.hpp"
#include "planarspin/path.hpp"
#include "planarspin/spin.hpp"
#include "support.hpp"

using namespace planarspin;
using test_support::uniform;

namespace {

const PhysicalConstants kRounded = PhysicalConstants::rounded();

PlanarState random_point() {
  return PlanarState::from_polar(uniform(0.01, 0.5), uniform(-kPi, kPi));
}

}  // namespace

TEST_SUITE("physics_core") {

TEST_CASE("coupling constant from the rounded moment") {
  CHECK(kRounded.c0() == doctest::Approx(9.65e-34).epsilon(1e-15));
  CHECK_NOTHROW(PhysicalConstants::codata().validate());
  PhysicalConstants bad;
  bad.mu = 1e-26;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("wire field magnitude and direction") {
  const auto p = PlanarState::from_cartesian({0.1, 0.0});
  const Vec2 b = magnetic_field(p, 400.0, kRounded);
  CHECK(b.x == doctest::Approx(0.0).epsilon(1e-20));
  CHECK(b.y == doctest::Approx(4e-7 * kPi * 400.0 / (2.0 * kPi * 0.1)).epsilon(1e-14));

  CHECK_THROWS_AS(magnetic_field(PlanarState{}, 400.0, kRounded), Error);
  try {
    magnetic_field(p, -1.0, kRounded);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
}

TEST_CASE("zeeman levels at the nominal radius") {
  const auto p = PlanarState::from_polar(0.1, 0.3);
  const auto levels = zeeman_levels(p, 400.0, kRounded);
  CHECK(levels[0] == doctest::Approx(3.86e-30).epsilon(1e-12));
  CHECK(levels[1] == doctest::Approx(-3.86e-30).epsilon(1e-12));
  const Mat2 h = zeeman_hamiltonian(p, 400.0, kRounded);
  CHECK(h.is_hermitian(1e-45));
  const Mat2 h2 = h * h;
  const double e2 = levels[0] * levels[0];
  CHECK(std::abs(h2.m00 - e2) < 1e-12 * e2);
  CHECK(std::abs(h2.m01) < 1e-12 * e2);
}

TEST_CASE("eigenframe diagonalizes the Hamiltonian everywhere") {
  for (int k = 0; k < 200; ++k) {
    const auto p = random_point();
    const auto f = local_eigenframe(p);
    const Mat2 h = zeeman_hamiltonian(p, 400.0, kRounded);
    const auto e = zeeman_levels(p, 400.0, kRounded);
    const Spinor hp = h * f.plus, hm = h * f.minus;
    CHECK(std::abs(hp.up - e[0] * f.plus.up) < 1e-12 * e[0]);
    CHECK(std::abs(hp.down - e[0] * f.plus.down) < 1e-12 * e[0]);
    CHECK(std::abs(hm.up - e[1] * f.minus.up) < 1e-12 * e[0]);
    CHECK(std::abs(inner(f.plus, f.minus)) < 1e-15);
    CHECK(std::abs(f.plus.norm() - 1.0) < 1e-15);
    const auto bloch = bloch_vector(f.plus);
    const Vec2 et = unit_azimuthal(p.theta);
    CHECK(bloch[0] == doctest::Approx(et.x).epsilon(1e-14));
    CHECK(bloch[1] == doctest::Approx(et.y).epsilon(1e-14));
    CHECK(std::abs(bloch[2]) < 1e-15);
  }
}

TEST_CASE("fixed gauge is single valued") {
  for (double th : {-2.0, 0.0, 0.7, 3.0}) {
    const auto a = local_eigenframe(th), b = local_eigenframe(th + kTwoPi);
    CHECK(std::abs(a.plus.down - b.plus.down) < 1e-14);
    CHECK(std::abs(a.minus.down - b.minus.down) < 1e-14);
  }
}

TEST_CASE("berry connection matches a finite-difference oracle") {
  // A = i <+|grad|+> by central differences of the eigenstate field.
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const auto p = random_point();
    for (int branch = 0; branch < 2; ++branch) {
      auto state = [&](Vec2 q) {
        const auto f = local_eigenframe(PlanarState::from_cartesian(q));
        return branch == 0 ? f.plus : f.minus;
      };
      const Spinor s0 = state(p.position());
      auto component = [&](Vec2 dir) {
        const Spinor a = state(p.position() + h * dir), b = state(p.position() - h * dir);
        const Spinor d{(a.up - b.up) / (2 * h), (a.down - b.down) / (2 * h)};
        return Complex(0, 1) * inner(s0, d);
      };
      const Complex ax = component({1, 0}), ay = component({0, 1});
      const Vec2 a = berry_connection(p);
      const double scale = 0.5 / p.r;
      CHECK(std::abs(ax.imag()) < 1e-6 * scale);
      CHECK(std::abs(ax.real() - a.x) < 1e-6 * scale);
      CHECK(std::abs(ay.real() - a.y) < 1e-6 * scale);
    }
  }
}

TEST_CASE("gauge transformation shifts the connection by grad chi") {
  const Gauge g{[](double t) { return 0.3 * std::sin(t) + 0.1 * std::cos(2 * t); },
                [](double t) { return 0.3 * std::cos(t) - 0.2 * std::sin(2 * t); }};
  const double h = 1e-6;
  for (int k = 0; k < 50; ++k) {
    const auto p = random_point();
    const auto plus = [&](double th) { return local_eigenframe(th, g).plus; };
    const Spinor a = plus(p.theta + h), b = plus(p.theta - h), s0 = plus(p.theta);
    const Spinor d{(a.up - b.up) / (2 * h), (a.down - b.down) / (2 * h)};
    const double a_theta = (Complex(0, 1) * inner(s0, d)).real() / p.r;
    const Vec2 conn = berry_connection(p, g);
    CHECK(dot(conn, unit_azimuthal(p.theta)) == doctest::Approx(a_theta).epsilon(1e-6));
    CHECK(std::abs(dot(conn, unit_radial(p.theta))) < 1e-12 / p.r);
  }
  // Loop integrals are gauge invariant, open ones shift by the end-point difference.
  const auto loop = test_support::random_loop({0, 0}, 0.05, 0.3, 9, false);
  CHECK(line_integral_connection(loop, g) == doctest::Approx(line_integral_connection(loop)).epsilon(1e-13));
  const Polyline open{{0.1, 0.0}, {0.0, 0.2}, {-0.1, 0.05}};
  const double th0 = 0.0, th1 = std::atan2(0.05, -0.1);
  CHECK(line_integral_connection(open, g) ==
        doctest::Approx(line_integral_connection(open) - (g.chi(th1) - g.chi(th0))).epsilon(1e-13));
}

TEST_CASE("line integral agrees with quadrature of A . dr") {
  for (int k = 0; k < 20; ++k) {
    Polyline path;
    for (int i = 0; i < 5; ++i) path.push_back(Vec2{uniform(-0.3, 0.3), uniform(0.05, 0.3)});
    CHECK(line_integral_connection(path) == doctest::Approx(test_support::quad_connection(path)).epsilon(1e-10));
  }
}

TEST_CASE("loop integral is quantized by the winding number") {
  Polyline circle;
  for (int i = 0; i <= 64; ++i) circle.push_back(0.1 * unit_radial(kTwoPi * i / 64));
  circle.back() = circle.front();
  CHECK(line_integral_connection(circle) == doctest::Approx(-kPi).epsilon(1e-14));
  CHECK(winding_number(circle) == 1);
  CHECK(line_integral_connection(reversed(circle)) == doctest::Approx(kPi).epsilon(1e-14));

  Polyline twice = circle;
  twice.insert(twice.end(), circle.begin() + 1, circle.end());
  CHECK(winding_number(twice) == 2);
  CHECK(line_integral_connection(twice) == doctest::Approx(-kTwoPi).epsilon(1e-14));

  const auto outside = test_support::random_loop({1.0, 0.5}, 0.1, 0.4, 10, false);
  CHECK(winding_number(outside) == 0);
  CHECK(std::abs(line_integral_connection(outside)) < 1e-14);
}

TEST_CASE("line integral is additive and odd under reversal") {
  const Polyline a{{0.2, 0.0}, {0.1, 0.2}, {-0.15, 0.1}};
  const Polyline b{{-0.15, 0.1}, {-0.2, -0.1}, {0.05, -0.2}};
  Polyline ab = a;
  ab.insert(ab.end(), b.begin() + 1, b.end());
  CHECK(line_integral_connection(ab) ==
        doctest::Approx(line_integral_connection(a) + line_integral_connection(b)).epsilon(1e-14));
  CHECK(line_integral_connection(reversed(ab)) == doctest::Approx(-line_integral_connection(ab)).epsilon(1e-14));
}

TEST_CASE("path errors") {
  const Polyline open{{0.1, 0.0}, {0.0, 0.1}};
  CHECK_THROWS_AS(winding_number(open), Error);
  const Polyline through{{-0.1, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {-0.1, 0.0}};
  try {
    line_integral_connection(through);
    FAIL("expected a singularity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSingularity);
  }
}

TEST_CASE("spin algebra helpers") {
  const Mat2 g = 0.3 * Mat2::pauli_x() + 1.7 * Mat2::pauli_y() - 0.4 * Mat2::pauli_z();
  const Mat2 u = exp_minus_i(g);
  CHECK(u.is_unitary(1e-15));
  const double n = std::sqrt(0.09 + 2.89 + 0.16);
  CHECK(std::abs(u.trace() - 2.0 * std::cos(n)) < 1e-15);
  const auto ev = hermitian_eigenvalues(g);
  CHECK(ev[0] == doctest::Approx(-n));
  CHECK(ev[1] == doctest::Approx(n));

  CHECK_THROWS_AS(DensityMatrix(Mat2::diagonal(1.5, -0.5)), Error);
  const Mat2 skew{0.5, 0.2, 0.0, 0.5};
  CHECK_THROWS_AS(DensityMatrix{skew}, Error);
  const Spinor zero{0.0, 0.0};
  CHECK_THROWS_AS(zero.normalized(), Error);
  const auto rho = DensityMatrix::pure(Spinor{1.0, Complex(0, 1)}.normalized());
  CHECK(std::abs(rho.matrix().trace() - 1.0) < 1e-15);
}

}  // TEST_SUITE
