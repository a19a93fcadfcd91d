#include "planarspin/harness/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "planarspin/error.hpp"

namespace planarspin::harness {
namespace {

struct UnitEntry {
  std::string_view symbol;
  Dimension dim;
  double scale;
};

constexpr double kDeg = std::numbers::pi / 180.0;

constexpr std::array kUnits{
    UnitEntry{"m", Dimension::kLength, 1.0},
    UnitEntry{"km", Dimension::kLength, 1e3},
    UnitEntry{"cm", Dimension::kLength, 1e-2},
    UnitEntry{"mm", Dimension::kLength, 1e-3},
    UnitEntry{"um", Dimension::kLength, 1e-6},
    UnitEntry{"nm", Dimension::kLength, 1e-9},
    UnitEntry{"s", Dimension::kTime, 1.0},
    UnitEntry{"ms", Dimension::kTime, 1e-3},
    UnitEntry{"us", Dimension::kTime, 1e-6},
    UnitEntry{"ns", Dimension::kTime, 1e-9},
    UnitEntry{"m/s", Dimension::kSpeed, 1.0},
    UnitEntry{"km/s", Dimension::kSpeed, 1e3},
    UnitEntry{"cm/s", Dimension::kSpeed, 1e-2},
    UnitEntry{"mm/s", Dimension::kSpeed, 1e-3},
    UnitEntry{"A", Dimension::kCurrent, 1.0},
    UnitEntry{"mA", Dimension::kCurrent, 1e-3},
    UnitEntry{"kA", Dimension::kCurrent, 1e3},
    UnitEntry{"MA", Dimension::kCurrent, 1e6},
    UnitEntry{"A/m^2", Dimension::kCurrentDensity, 1.0},
    UnitEntry{"A/cm^2", Dimension::kCurrentDensity, 1e4},
    UnitEntry{"A/mm^2", Dimension::kCurrentDensity, 1e6},
    UnitEntry{"J*s", Dimension::kAction, 1.0},
    UnitEntry{"J.s", Dimension::kAction, 1.0},
    UnitEntry{"kg", Dimension::kMass, 1.0},
    UnitEntry{"g", Dimension::kMass, 1e-3},
    UnitEntry{"J/T", Dimension::kMagneticMoment, 1.0},
    UnitEntry{"H/m", Dimension::kPermeability, 1.0},
    UnitEntry{"T*m/A", Dimension::kPermeability, 1.0},
    UnitEntry{"V*s/(A*m)", Dimension::kPermeability, 1.0},
    UnitEntry{"rad", Dimension::kAngle, 1.0},
    UnitEntry{"deg", Dimension::kAngle, kDeg},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::kDimensionless: return "dimensionless";
    case Dimension::kLength: return "length";
    case Dimension::kTime: return "time";
    case Dimension::kSpeed: return "speed";
    case Dimension::kCurrent: return "current";
    case Dimension::kCurrentDensity: return "current density";
    case Dimension::kAction: return "action";
    case Dimension::kMass: return "mass";
    case Dimension::kMagneticMoment: return "magnetic moment";
    case Dimension::kPermeability: return "permeability";
    case Dimension::kAngle: return "angle";
  }
  return "?";
}

[[noreturn]] void fail(std::string_view text, const std::string& why) {
  throw Error(ErrorKind::kValidation, "cannot parse quantity '" + std::string(text) + "': " + why);
}

}  // namespace

std::string_view base_unit(Dimension dim) noexcept {
  switch (dim) {
    case Dimension::kDimensionless: return "";
    case Dimension::kLength: return "m";
    case Dimension::kTime: return "s";
    case Dimension::kSpeed: return "m/s";
    case Dimension::kCurrent: return "A";
    case Dimension::kCurrentDensity: return "A/m^2";
    case Dimension::kAction: return "J*s";
    case Dimension::kMass: return "kg";
    case Dimension::kMagneticMoment: return "J/T";
    case Dimension::kPermeability: return "H/m";
    case Dimension::kAngle: return "rad";
  }
  return "";
}

double parse_quantity(std::string_view text, Dimension expected) {
  const std::string_view s = trim(text);
  if (s.empty()) fail(text, "empty value");
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{}) fail(text, "no leading number");
  if (!std::isfinite(value)) fail(text, "value is not finite");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));

  if (unit.empty()) {
    if (expected == Dimension::kDimensionless || expected == Dimension::kAngle) return value;
    fail(text, "missing unit (expected " + std::string(dimension_name(expected)) + ", e.g. " +
                   std::string(base_unit(expected)) + ")");
  }
  for (const auto& u : kUnits) {
    if (u.symbol != unit) continue;
    if (u.dim != expected) {
      fail(text, "unit '" + std::string(unit) + "' is a " + std::string(dimension_name(u.dim)) + ", expected " +
                     std::string(dimension_name(expected)));
    }
    return value * u.scale;
  }
  fail(text, "unknown unit '" + std::string(unit) + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string format_quantity(double si_value, Dimension dim) {
  std::string out = format_double(si_value);
  if (dim != Dimension::kDimensionless) {
    out += ' ';
    out += base_unit(dim);
  }
  return out;
}

}  // namespace planarspin::harness
