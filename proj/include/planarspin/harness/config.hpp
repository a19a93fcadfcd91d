#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planarspin/constants.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/planar.hpp"

namespace planarspin::harness {

enum class OutputFormat { kCsv, kJson, kBoth };
enum class ModeSelection { kAnalytic, kPropagated, kBoth };
enum class InitialSpin { kUnpolarized, kPlus, kMinus, kUp, kDown };

struct RunConfig {
  std::string constants_preset = "rounded";
  PhysicalConstants constants = PhysicalConstants::rounded();

  struct Orbit {
    double v = 2000.0;
    double b = 0.1;
    double current = 400.0;
    SpinBranch branch = SpinBranch::kPlus;
    LaunchMode launch = LaunchMode::kAsymptotic;
    double upstream = 20.0;
    std::optional<std::pair<double, double>> theta_range;  // analytic sampling window
    std::size_t samples = 401;
    bool operator==(const Orbit&) const = default;
  } orbit;

  struct Geometry {
    double arm_half_length = 0.2;
    double arm_height = 0.1;
    Vec2 wire_offset{};
    double wire_radius = kDefaultWireRadius;
    bool operator==(const Geometry&) const = default;
  } geometry;

  struct Wire {
    double current_density_limit = 5e6;  // 500 A/cm^2
    bool operator==(const Wire&) const = default;
  } wire;

  struct Window {
    double margin = 10.0;
    bool operator==(const Window&) const = default;
  } window;

  struct Interferometer {
    InitialSpin rho = InitialSpin::kUnpolarized;
    double adiabaticity_threshold = 0.2;
    std::vector<double> offset_scan;  // wire y offsets for the mismatch curve
    bool operator==(const Interferometer&) const = default;
  } interferometer;

  struct Sweep {
    std::vector<double> v{2000.0};
    std::vector<double> b{0.1};
    std::vector<double> current;  // default: 9 log-spaced points 50 A .. 5000 A
    std::vector<double> wire_offset_y{0.0};
    std::size_t max_points = 10000;
    bool operator==(const Sweep&) const = default;
  } sweep;

  struct Tolerances {
    double orbit_relative = 1e-12;
    double conservation = 1e-9;
    double spin = 1e-10;
    double unitarity = 1e-10;
    bool operator==(const Tolerances&) const = default;
  } tolerances;

  struct Output {
    std::string dir = "out";
    OutputFormat format = OutputFormat::kBoth;
    ModeSelection mode = ModeSelection::kBoth;
    unsigned jobs = 1;
    bool timings = false;
    bool operator==(const Output&) const = default;
  } output;

  RunConfig();

  /// Throws Error(kValidation) naming the first offending key.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// n points from a to b, geometrically spaced; the end points are exact.
std::vector<double> log_space(double a, double b, std::size_t n);
std::vector<double> lin_space(double a, double b, std::size_t n);

/// Parses YAML text, applies "section.key=value" overrides (values are YAML) and validates.
RunConfig parse_config(std::string_view yaml_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Canonical YAML with SI unit suffixes; parse_config(to_yaml(c)) == c.
std::string to_yaml(const RunConfig& config);

std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(ModeSelection m) noexcept;
std::string_view to_string(InitialSpin s) noexcept;
OutputFormat parse_output_format(std::string_view s);
ModeSelection parse_mode(std::string_view s);

}  // namespace planarspin::harness
