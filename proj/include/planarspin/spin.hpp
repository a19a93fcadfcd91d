#pragma once

#include <array>
#include <complex>

namespace planarspin {

using Complex = std::complex<double>;

/// Two-component spin state in the sigma_z basis.
struct Spinor {
  Complex up{1.0, 0.0};
  Complex down{0.0, 0.0};

  double norm() const noexcept;
  /// Throws Error(kValidation) for a zero vector.
  Spinor normalized() const;

  friend Spinor operator*(Complex s, const Spinor& a) noexcept { return {s * a.up, s * a.down}; }
  friend Spinor operator+(const Spinor& a, const Spinor& b) noexcept { return {a.up + b.up, a.down + b.down}; }
};

/// <a|b>
inline Complex inner(const Spinor& a, const Spinor& b) noexcept {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

/// Expectation value of (sigma_x, sigma_y, sigma_z).
std::array<double, 3> bloch_vector(const Spinor& s) noexcept;

/// 2x2 complex matrix, row major.
struct Mat2 {
  Complex m00{}, m01{}, m10{}, m11{};

  static Mat2 identity() noexcept { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() noexcept { return {}; }
  static Mat2 diagonal(Complex a, Complex d) noexcept { return {a, 0.0, 0.0, d}; }
  static Mat2 pauli_x() noexcept { return {0.0, 1.0, 1.0, 0.0}; }
  static Mat2 pauli_y() noexcept { return {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}; }
  static Mat2 pauli_z() noexcept { return {1.0, 0.0, 0.0, -1.0}; }
  /// |a><b|
  static Mat2 outer(const Spinor& a, const Spinor& b) noexcept {
    return {a.up * std::conj(b.up), a.up * std::conj(b.down), a.down * std::conj(b.up),
            a.down * std::conj(b.down)};
  }

  Complex trace() const noexcept { return m00 + m11; }
  Mat2 adjoint() const noexcept { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
  /// Largest absolute entry.
  double max_abs() const noexcept;

  bool is_hermitian(double tol) const noexcept;
  bool is_unitary(double tol) const noexcept;

  friend Mat2 operator+(const Mat2& a, const Mat2& b) noexcept {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) noexcept {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
  }
  friend Mat2 operator*(Complex s, const Mat2& a) noexcept { return {s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
  friend Spinor operator*(const Mat2& a, const Spinor& s) noexcept {
    return {a.m00 * s.up + a.m01 * s.down, a.m10 * s.up + a.m11 * s.down};
  }
};

/// <a|M|b>
inline Complex sandwich(const Spinor& a, const Mat2& m, const Spinor& b) noexcept { return inner(a, m * b); }

/// Ascending eigenvalues of a Hermitian 2x2 matrix (closed form).
std::array<double, 2> hermitian_eigenvalues(const Mat2& h) noexcept;

/// exp(-i G) for traceless Hermitian G = g . sigma: cos|g| 1 - i sin|g| (g/|g|) . sigma.
/// Only the traceless Hermitian part of `g_matrix` is used.
Mat2 exp_minus_i(const Mat2& g_matrix) noexcept;

/// Spin density operator: Hermitian, unit trace, eigenvalues in [0, 1].
class DensityMatrix {
 public:
  /// Throws Error(kValidation) if `m` violates the invariants beyond `tol`.
  explicit DensityMatrix(const Mat2& m, double tol = 1e-12);

  static DensityMatrix unpolarized() { return DensityMatrix(Mat2::diagonal(0.5, 0.5)); }
  static DensityMatrix pure(const Spinor& s);

  const Mat2& matrix() const noexcept { return m_; }

 private:
  Mat2 m_;
};

}  // namespace planarspin
