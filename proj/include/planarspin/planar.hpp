#pragma once

#include <cmath>
#include <numbers>

namespace planarspin {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }

/// Radial and azimuthal unit vectors of the cylindrical frame around the wire.
inline Vec2 unit_radial(double theta) noexcept { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 unit_azimuthal(double theta) noexcept { return {-std::sin(theta), std::cos(theta)}; }

/// Reduces an angle to (-pi, pi].
inline double wrap_pi(double angle) noexcept {
  double w = std::remainder(angle, kTwoPi);
  return w == -kPi ? kPi : w;
}

/// Reduces an angle to [0, 2 pi).
inline double wrap_two_pi(double angle) noexcept {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w >= kTwoPi ? 0.0 : w;
}

/// Signed angle swept from direction a to direction b as seen from the origin, in (-pi, pi].
inline double swept_angle(Vec2 a, Vec2 b) noexcept { return std::atan2(cross(a, b), dot(a, b)); }

/// Position and velocity in the plane transverse to the wire (wire at the origin).
/// `theta` is the continuously unwound polar angle, not reduced mod 2 pi.
struct PlanarState {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  /// Builds a state from Cartesian data. The polar angle is the branch of atan2(y, x)
  /// closest to `theta_hint`, so successive calls along a path keep theta continuous.
  static PlanarState from_cartesian(Vec2 position, Vec2 velocity = {}, double theta_hint = 0.0) noexcept {
    double raw = std::atan2(position.y, position.x);
    double theta = raw + kTwoPi * std::round((theta_hint - raw) / kTwoPi);
    return {position.x, position.y, norm(position), theta, velocity.x, velocity.y};
  }

  static PlanarState from_polar(double r, double theta, Vec2 velocity = {}) noexcept {
    return {r * std::cos(theta), r * std::sin(theta), r, theta, velocity.x, velocity.y};
  }

  Vec2 position() const noexcept { return {x, y}; }
  Vec2 velocity() const noexcept { return {vx, vy}; }

  /// Radial velocity dr/dt.
  double v_r() const noexcept { return (x * vx + y * vy) / r; }
  /// Azimuthal velocity r dtheta/dt = (x vy - y vx) / r.
  double v_theta() const noexcept { return (x * vy - y * vx) / r; }
};

}  // namespace planarspin
