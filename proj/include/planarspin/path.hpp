#pragma once

#include <span>
#include <vector>

#include "planarspin/constants.hpp"
#include "planarspin/field.hpp"
#include "planarspin/planar.hpp"

namespace planarspin {

using Polyline = std::vector<Vec2>;

/// Tolerance for deciding that a polyline is closed.
inline constexpr double kClosureTolerance = 1e-9;

/// Distance from the origin to the segment [a, b].
double segment_distance_to_origin(Vec2 a, Vec2 b) noexcept;

/// Unwound polar angle swept by a polyline around the origin (wire frame).
/// Each straight segment contributes its exact subtended angle. Throws Error(kSingularity)
/// if any segment comes within `wire_radius` of the origin.
double swept_angle(std::span<const Vec2> path, double wire_radius = kDefaultWireRadius);

/// Unwound angle swept by sampled states; consecutive increments must be below pi.
double swept_angle(std::span<const PlanarState> samples, double wire_radius = kDefaultWireRadius);

/// Integral of the Berry connection along the path: -(1/2) times the unwound swept angle.
/// Additive under concatenation and odd under reversal.
double line_integral_connection(std::span<const Vec2> path, double wire_radius = kDefaultWireRadius);
double line_integral_connection(std::span<const PlanarState> samples, double wire_radius = kDefaultWireRadius);
/// Same integral in a re-fixed gauge. Open paths pick up chi(theta_start) - chi(theta_end).
double line_integral_connection(std::span<const Vec2> path, const Gauge& gauge,
                                double wire_radius = kDefaultWireRadius);

bool is_closed(std::span<const Vec2> path) noexcept;

/// Signed number of turns of a closed polyline around the origin.
/// Throws Error(kOpenPath) for open paths and Error(kSingularity) for paths touching the wire.
int winding_number(std::span<const Vec2> closed_path, double wire_radius = kDefaultWireRadius);

/// Translates a polyline so that `origin` becomes (0, 0).
Polyline relative_to(std::span<const Vec2> path, Vec2 origin);

Polyline reversed(std::span<const Vec2> path);

double path_length(std::span<const Vec2> path) noexcept;

}  // namespace planarspin
