#include "planarspin/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "planarspin/error.hpp"

namespace planarspin {
namespace {

void check_clearance(Vec2 a, Vec2 b, double wire_radius) {
  const double d = segment_distance_to_origin(a, b);
  if (d <= wire_radius) {
    std::ostringstream os;
    os << "path segment (" << a.x << ", " << a.y << ") -> (" << b.x << ", " << b.y << ") passes within " << d
       << " m of the wire (exclusion radius " << wire_radius << " m)";
    throw Error(ErrorKind::kSingularity, os.str());
  }
}

}  // namespace

double segment_distance_to_origin(Vec2 a, Vec2 b) noexcept {
  const Vec2 d = b - a;
  const double len_sq = dot(d, d);
  if (len_sq == 0.0) return norm(a);
  const double t = std::clamp(-dot(a, d) / len_sq, 0.0, 1.0);
  return norm(a + t * d);
}

double swept_angle(std::span<const Vec2> path, double wire_radius) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    check_clearance(path[i], path[i + 1], wire_radius);
    total += swept_angle(path[i], path[i + 1]);
  }
  if (path.size() == 1) check_clearance(path[0], path[0], wire_radius);
  return total;
}

double swept_angle(std::span<const PlanarState> samples, double wire_radius) {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].r <= wire_radius)
      throw Error(ErrorKind::kSingularity, "trajectory sample inside the wire exclusion radius");
    if (i == 0) continue;
    const double step = swept_angle(samples[i - 1].position(), samples[i].position());
    if (std::abs(step) >= kPi)
      throw Error(ErrorKind::kRange, "trajectory angular increment reaches pi; resample the path");
    total += step;
  }
  return total;
}

double line_integral_connection(std::span<const Vec2> path, double wire_radius) {
  return -0.5 * swept_angle(path, wire_radius);
}

double line_integral_connection(std::span<const PlanarState> samples, double wire_radius) {
  return -0.5 * swept_angle(samples, wire_radius);
}

double line_integral_connection(std::span<const Vec2> path, const Gauge& gauge, double wire_radius) {
  if (path.empty()) return 0.0;
  const double sweep = swept_angle(path, wire_radius);
  const double theta_start = std::atan2(path.front().y, path.front().x);
  const double theta_end = theta_start + sweep;
  return -0.5 * sweep - (gauge.chi(theta_end) - gauge.chi(theta_start));
}

bool is_closed(std::span<const Vec2> path) noexcept {
  return path.size() >= 2 && norm(path.back() - path.front()) <= kClosureTolerance;
}

int winding_number(std::span<const Vec2> closed_path, double wire_radius) {
  if (!is_closed(closed_path)) throw Error(ErrorKind::kOpenPath, "winding number requires a closed path");
  const double turns = swept_angle(closed_path, wire_radius) / kTwoPi;
  return static_cast<int>(std::lround(turns));
}

Polyline relative_to(std::span<const Vec2> path, Vec2 origin) {
  Polyline out;
  out.reserve(path.size());
  for (Vec2 v : path) out.push_back(v - origin);
  return out;
}

Polyline reversed(std::span<const Vec2> path) { return Polyline(path.rbegin(), path.rend()); }

double path_length(std::span<const Vec2> path) noexcept {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) len += norm(path[i + 1] - path[i]);
  return len;
}

}  // namespace planarspin
