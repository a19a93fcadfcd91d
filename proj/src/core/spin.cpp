#include "planarspin/spin.hpp"

#include <algorithm>
#include <cmath>

#include "planarspin/error.hpp"

namespace planarspin {

double Spinor::norm() const noexcept { return std::sqrt(std::norm(up) + std::norm(down)); }

Spinor Spinor::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw Error(ErrorKind::kValidation, "cannot normalize a zero spinor");
  return {up / n, down / n};
}

std::array<double, 3> bloch_vector(const Spinor& s) noexcept {
  const Complex c = std::conj(s.up) * s.down;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(s.up) - std::norm(s.down)};
}

double Mat2::max_abs() const noexcept {
  return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
}

bool Mat2::is_hermitian(double tol) const noexcept { return (*this - adjoint()).max_abs() <= tol; }

bool Mat2::is_unitary(double tol) const noexcept { return (adjoint() * *this - identity()).max_abs() <= tol; }

std::array<double, 2> hermitian_eigenvalues(const Mat2& h) noexcept {
  const double a = h.m00.real();
  const double d = h.m11.real();
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::sqrt(half_diff * half_diff + std::norm(h.m01));
  return {mean - radius, mean + radius};
}

Mat2 exp_minus_i(const Mat2& g) noexcept {
  // Traceless Hermitian part: g . sigma with g = (Re g10, Im g10, (g00 - g11)/2).
  const Complex off = 0.5 * (g.m10 + std::conj(g.m01));
  const double gx = off.real();
  const double gy = off.imag();
  const double gz = 0.5 * (g.m00.real() - g.m11.real());
  const double angle = std::sqrt(gx * gx + gy * gy + gz * gz);
  const double c = std::cos(angle);
  // sin(x)/x, stable at small x.
  const double sinc = angle > 1e-8 ? std::sin(angle) / angle : 1.0 - angle * angle / 6.0;
  const Complex mi(0.0, -sinc);
  return {Complex(c, 0.0) + mi * gz, mi * Complex(gx, -gy), mi * Complex(gx, gy), Complex(c, 0.0) - mi * gz};
}

DensityMatrix::DensityMatrix(const Mat2& m, double tol) : m_(m) {
  if (!m.is_hermitian(tol)) throw Error(ErrorKind::kValidation, "density matrix is not Hermitian");
  if (std::abs(m.trace() - 1.0) > tol) throw Error(ErrorKind::kValidation, "density matrix trace differs from 1");
  const auto ev = hermitian_eigenvalues(m);
  if (ev[0] < -tol || ev[1] > 1.0 + tol)
    throw Error(ErrorKind::kValidation, "density matrix eigenvalues outside [0, 1]");
}

DensityMatrix DensityMatrix::pure(const Spinor& s) {
  const Spinor n = s.normalized();
  return DensityMatrix(Mat2::outer(n, n));
}

}  // namespace planarspin
