#pragma once

#include <string>
#include <string_view>

namespace planarspin::harness {

enum class Dimension {
  kDimensionless,
  kLength,
  kTime,
  kSpeed,
  kCurrent,
  kCurrentDensity,
  kAction,
  kMass,
  kMagneticMoment,
  kPermeability,
  kAngle,
};

std::string_view base_unit(Dimension dim) noexcept;

/// Parses "<number> <unit>" into SI, e.g. "2 km/s", "500 A/cm^2", "5 mm".
/// Dimensionless values take no unit; angles accept rad or deg. Every other dimension
/// requires a unit. Throws Error(kValidation) on malformed text or a dimension mismatch.
double parse_quantity(std::string_view text, Dimension expected);

/// Shortest round-trip decimal representation ("nan", "inf" and "-inf" for non-finite values).
std::string format_double(double value);

/// "<shortest SI value> <base unit>", or just the number for dimensionless values.
std::string format_quantity(double si_value, Dimension dim);

}  // namespace planarspin::harness
