#include "planarspin/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "planarspin/error.hpp"
#include "planarspin/harness/units.hpp"

namespace planarspin::harness {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::kValidation, msg); }

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
  if (!node.IsMap()) invalid("section '" + section + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) invalid("unknown key '" + section + "." + key + "'");
  }
}

std::string scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) invalid("'" + key + "' must be a scalar");
  return node.as<std::string>();
}

double quantity(const YAML::Node& node, const std::string& key, Dimension dim) {
  try {
    return parse_quantity(scalar(node, key), dim);
  } catch (const Error& e) {
    invalid(key + ": " + e.what());
  }
}

std::size_t count(const YAML::Node& node, const std::string& key) {
  const double v = quantity(node, key, Dimension::kDimensionless);
  if (v < 0 || v != std::floor(v) || v > 1e9) invalid(key + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool boolean(const YAML::Node& node, const std::string& key) {
  const auto s = scalar(node, key);
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  invalid(key + " must be true or false");
}

/// Scalar, explicit list, or {log|linear: [a, b], n: N}.
std::vector<double> grid(const YAML::Node& node, const std::string& key, Dimension dim) {
  std::vector<double> out;
  if (node.IsNull()) return out;
  if (node.IsScalar()) {
    out.push_back(quantity(node, key, dim));
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(quantity(node[i], key, dim));
  } else if (node.IsMap()) {
    const bool log = static_cast<bool>(node["log"]);
    const bool lin = static_cast<bool>(node["linear"]);
    if (log == lin) invalid(key + ": range needs exactly one of 'log' or 'linear'");
    check_keys(node, key, {"log", "linear", "n"});
    const auto ends = node[log ? "log" : "linear"];
    if (!ends.IsSequence() || ends.size() != 2) invalid(key + ": range end points must be a two-element list");
    if (!node["n"]) invalid(key + ": range needs 'n'");
    const double a = quantity(ends[0], key, dim);
    const double b = quantity(ends[1], key, dim);
    const std::size_t n = count(node["n"], key + ".n");
    if (log && (a <= 0 || b <= 0)) invalid(key + ": log range needs positive end points");
    out = log ? log_space(a, b, n) : lin_space(a, b, n);
  } else {
    invalid(key + ": unsupported value");
  }
  return out;
}

SpinBranch parse_branch(const std::string& s) {
  if (s == "plus" || s == "+") return SpinBranch::kPlus;
  if (s == "minus" || s == "-") return SpinBranch::kMinus;
  invalid("orbit.branch must be plus or minus");
}

LaunchMode parse_launch(const std::string& s) {
  if (s == "asymptotic") return LaunchMode::kAsymptotic;
  if (s == "horizontal") return LaunchMode::kHorizontal;
  invalid("orbit.launch must be asymptotic or horizontal");
}

InitialSpin parse_spin(const std::string& s) {
  if (s == "unpolarized") return InitialSpin::kUnpolarized;
  if (s == "plus") return InitialSpin::kPlus;
  if (s == "minus") return InitialSpin::kMinus;
  if (s == "up") return InitialSpin::kUp;
  if (s == "down") return InitialSpin::kDown;
  invalid("interferometer.rho must be one of unpolarized, plus, minus, up, down");
}

void apply_override(YAML::Node& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) invalid("override '" + text + "' is not of the form section.key=value");
  const std::string path = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  const auto dot = path.find('.');
  if (dot == std::string::npos) invalid("override key '" + path + "' must be section.key");
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    invalid("override '" + text + "': " + e.what());
  }
  root[section][key] = parsed;
}

RunConfig from_node(const YAML::Node& root) {
  RunConfig c;
  if (!root || root.IsNull()) return c;
  check_keys(root, "<root>",
             {"constants", "orbit", "geometry", "wire", "window", "interferometer", "sweep", "tolerances", "output"});

  if (const auto n = root["constants"]) {
    check_keys(n, "constants", {"preset", "hbar", "m_n", "mu", "mu0"});
    if (n["preset"]) {
      c.constants_preset = scalar(n["preset"], "constants.preset");
      if (c.constants_preset == "rounded") c.constants = PhysicalConstants::rounded();
      else if (c.constants_preset == "codata") c.constants = PhysicalConstants::codata();
      else invalid("constants.preset must be rounded or codata");
    }
    if (n["hbar"]) c.constants.hbar = quantity(n["hbar"], "constants.hbar", Dimension::kAction);
    if (n["m_n"]) c.constants.m_n = quantity(n["m_n"], "constants.m_n", Dimension::kMass);
    if (n["mu"]) c.constants.mu = quantity(n["mu"], "constants.mu", Dimension::kMagneticMoment);
    if (n["mu0"]) c.constants.mu0 = quantity(n["mu0"], "constants.mu0", Dimension::kPermeability);
  }

  if (const auto n = root["orbit"]) {
    check_keys(n, "orbit", {"v", "b", "current", "branch", "launch", "upstream", "theta_range", "samples"});
    if (n["v"]) c.orbit.v = quantity(n["v"], "orbit.v", Dimension::kSpeed);
    if (n["b"]) c.orbit.b = quantity(n["b"], "orbit.b", Dimension::kLength);
    if (n["current"]) c.orbit.current = quantity(n["current"], "orbit.current", Dimension::kCurrent);
    if (n["branch"]) c.orbit.branch = parse_branch(scalar(n["branch"], "orbit.branch"));
    if (n["launch"]) c.orbit.launch = parse_launch(scalar(n["launch"], "orbit.launch"));
    if (n["upstream"]) c.orbit.upstream = quantity(n["upstream"], "orbit.upstream", Dimension::kDimensionless);
    if (n["samples"]) c.orbit.samples = count(n["samples"], "orbit.samples");
    if (const auto t = n["theta_range"]; t && !t.IsNull()) {
      if (!t.IsSequence() || t.size() != 2) invalid("orbit.theta_range must be a two-element list");
      c.orbit.theta_range = std::pair{quantity(t[0], "orbit.theta_range", Dimension::kAngle),
                                      quantity(t[1], "orbit.theta_range", Dimension::kAngle)};
    }
  }

  if (const auto n = root["geometry"]) {
    check_keys(n, "geometry", {"arm_half_length", "arm_height", "wire_offset", "wire_radius"});
    if (n["arm_half_length"])
      c.geometry.arm_half_length = quantity(n["arm_half_length"], "geometry.arm_half_length", Dimension::kLength);
    if (n["arm_height"]) c.geometry.arm_height = quantity(n["arm_height"], "geometry.arm_height", Dimension::kLength);
    if (n["wire_radius"])
      c.geometry.wire_radius = quantity(n["wire_radius"], "geometry.wire_radius", Dimension::kLength);
    if (const auto w = n["wire_offset"]) {
      if (!w.IsSequence() || w.size() != 2) invalid("geometry.wire_offset must be [x, y]");
      c.geometry.wire_offset = {quantity(w[0], "geometry.wire_offset", Dimension::kLength),
                                quantity(w[1], "geometry.wire_offset", Dimension::kLength)};
    }
  }

  if (const auto n = root["wire"]) {
    check_keys(n, "wire", {"current_density_limit"});
    if (n["current_density_limit"])
      c.wire.current_density_limit =
          quantity(n["current_density_limit"], "wire.current_density_limit", Dimension::kCurrentDensity);
  }

  if (const auto n = root["window"]) {
    check_keys(n, "window", {"margin"});
    if (n["margin"]) c.window.margin = quantity(n["margin"], "window.margin", Dimension::kDimensionless);
  }

  if (const auto n = root["interferometer"]) {
    check_keys(n, "interferometer", {"rho", "adiabaticity_threshold", "offset_scan"});
    if (n["rho"]) c.interferometer.rho = parse_spin(scalar(n["rho"], "interferometer.rho"));
    if (n["adiabaticity_threshold"])
      c.interferometer.adiabaticity_threshold = quantity(
          n["adiabaticity_threshold"], "interferometer.adiabaticity_threshold", Dimension::kDimensionless);
    if (n["offset_scan"])
      c.interferometer.offset_scan = grid(n["offset_scan"], "interferometer.offset_scan", Dimension::kLength);
  }

  if (const auto n = root["sweep"]) {
    check_keys(n, "sweep", {"v", "b", "current", "wire_offset_y", "max_points"});
    if (n["v"]) c.sweep.v = grid(n["v"], "sweep.v", Dimension::kSpeed);
    if (n["b"]) c.sweep.b = grid(n["b"], "sweep.b", Dimension::kLength);
    if (n["current"]) c.sweep.current = grid(n["current"], "sweep.current", Dimension::kCurrent);
    if (n["wire_offset_y"]) c.sweep.wire_offset_y = grid(n["wire_offset_y"], "sweep.wire_offset_y", Dimension::kLength);
    if (n["max_points"]) c.sweep.max_points = count(n["max_points"], "sweep.max_points");
  }

  if (const auto n = root["tolerances"]) {
    check_keys(n, "tolerances", {"orbit_relative", "conservation", "spin", "unitarity"});
    auto& t = c.tolerances;
    if (n["orbit_relative"])
      t.orbit_relative = quantity(n["orbit_relative"], "tolerances.orbit_relative", Dimension::kDimensionless);
    if (n["conservation"])
      t.conservation = quantity(n["conservation"], "tolerances.conservation", Dimension::kDimensionless);
    if (n["spin"]) t.spin = quantity(n["spin"], "tolerances.spin", Dimension::kDimensionless);
    if (n["unitarity"]) t.unitarity = quantity(n["unitarity"], "tolerances.unitarity", Dimension::kDimensionless);
  }

  if (const auto n = root["output"]) {
    check_keys(n, "output", {"dir", "format", "mode", "jobs", "timings"});
    if (n["dir"]) c.output.dir = scalar(n["dir"], "output.dir");
    if (n["format"]) c.output.format = parse_output_format(scalar(n["format"], "output.format"));
    if (n["mode"]) c.output.mode = parse_mode(scalar(n["mode"], "output.mode"));
    if (n["jobs"]) c.output.jobs = static_cast<unsigned>(count(n["jobs"], "output.jobs"));
    if (n["timings"]) c.output.timings = boolean(n["timings"], "output.timings");
  }
  return c;
}

void emit_list(YAML::Emitter& out, const std::vector<double>& values, Dimension dim) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) out << format_quantity(v, dim);
  out << YAML::EndSeq;
}

std::string_view branch_name(SpinBranch b) { return b == SpinBranch::kPlus ? "plus" : "minus"; }
std::string_view launch_name(LaunchMode m) { return m == LaunchMode::kAsymptotic ? "asymptotic" : "horizontal"; }

}  // namespace

RunConfig::RunConfig() { sweep.current = log_space(50.0, 5000.0, 9); }

std::vector<double> log_space(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) return out;
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = n == 1 ? a : std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = a;
  if (n > 1) out.back() = b;
  return out;
}

std::vector<double> lin_space(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  if (n > 1) out.back() = b;
  return out;
}

void RunConfig::validate() const {
  try {
    constants.validate();
  } catch (const Error& e) {
    invalid(std::string("constants: ") + e.what());
  }
  // b may sit inside the wire radius here; the window command accepts it and the orbit
  // commands reject it when they build their OrbitParams.
  if (!(orbit.v > 0) || !std::isfinite(orbit.v)) invalid("orbit.v must be positive");
  if (!(orbit.b > 0) || !std::isfinite(orbit.b)) invalid("orbit.b must be positive");
  if (!(orbit.current >= 0) || !std::isfinite(orbit.current)) invalid("orbit.current must be non-negative");
  if (!(orbit.upstream > 1)) invalid("orbit.upstream must exceed 1");
  if (orbit.samples < 2) invalid("orbit.samples must be at least 2");
  if (orbit.theta_range && !(orbit.theta_range->first != orbit.theta_range->second))
    invalid("orbit.theta_range must have distinct end points");
  if (!(geometry.arm_half_length > 0) || !(geometry.arm_height > 0))
    invalid("geometry.arm_half_length and geometry.arm_height must be positive");
  if (!(geometry.wire_radius > 0)) invalid("geometry.wire_radius must be positive");
  if (!(wire.current_density_limit > 0)) invalid("wire.current_density_limit must be positive");
  if (!(window.margin >= 1)) invalid("window.margin must be at least 1");
  if (!(interferometer.adiabaticity_threshold > 0)) invalid("interferometer.adiabaticity_threshold must be positive");

  auto positive_grid = [](const std::vector<double>& g, const char* key) {
    if (g.empty()) invalid(std::string(key) + " grid is empty");
    for (double x : g)
      if (!(x > 0) || !std::isfinite(x)) invalid(std::string(key) + " values must be positive and finite");
  };
  positive_grid(sweep.v, "sweep.v");
  positive_grid(sweep.b, "sweep.b");
  positive_grid(sweep.current, "sweep.current");
  if (sweep.wire_offset_y.empty()) invalid("sweep.wire_offset_y grid is empty");
  for (double y : sweep.wire_offset_y)
    if (!std::isfinite(y)) invalid("sweep.wire_offset_y values must be finite");
  if (sweep.max_points == 0) invalid("sweep.max_points must be positive");
  const double points = static_cast<double>(sweep.v.size()) * static_cast<double>(sweep.b.size()) *
                        static_cast<double>(sweep.current.size()) * static_cast<double>(sweep.wire_offset_y.size());
  if (points > static_cast<double>(sweep.max_points))
    invalid("sweep grid has " + format_double(points) + " points, above sweep.max_points = " +
            std::to_string(sweep.max_points));

  for (auto [v, key] : {std::pair{tolerances.orbit_relative, "tolerances.orbit_relative"},
                        std::pair{tolerances.conservation, "tolerances.conservation"},
                        std::pair{tolerances.spin, "tolerances.spin"},
                        std::pair{tolerances.unitarity, "tolerances.unitarity"}}) {
    if (!(v > 0) || !std::isfinite(v)) invalid(std::string(key) + " must be positive");
  }
  if (output.dir.empty()) invalid("output.dir must not be empty");
  if (output.jobs == 0) invalid("output.jobs must be at least 1");
}

RunConfig parse_config(std::string_view yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    invalid(std::string("config is not valid YAML: ") + e.what());
  }
  if (!overrides.empty() && (!root || root.IsNull())) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& o : overrides) apply_override(root, o);
  RunConfig c;
  try {
    c = from_node(root);
  } catch (const YAML::Exception& e) {
    invalid(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "constants" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "preset" << YAML::Value << c.constants_preset;
  out << YAML::Key << "hbar" << YAML::Value << format_quantity(c.constants.hbar, Dimension::kAction);
  out << YAML::Key << "m_n" << YAML::Value << format_quantity(c.constants.m_n, Dimension::kMass);
  out << YAML::Key << "mu" << YAML::Value << format_quantity(c.constants.mu, Dimension::kMagneticMoment);
  out << YAML::Key << "mu0" << YAML::Value << format_quantity(c.constants.mu0, Dimension::kPermeability);
  out << YAML::EndMap;

  out << YAML::Key << "orbit" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "v" << YAML::Value << format_quantity(c.orbit.v, Dimension::kSpeed);
  out << YAML::Key << "b" << YAML::Value << format_quantity(c.orbit.b, Dimension::kLength);
  out << YAML::Key << "current" << YAML::Value << format_quantity(c.orbit.current, Dimension::kCurrent);
  out << YAML::Key << "branch" << YAML::Value << std::string(branch_name(c.orbit.branch));
  out << YAML::Key << "launch" << YAML::Value << std::string(launch_name(c.orbit.launch));
  out << YAML::Key << "upstream" << YAML::Value << format_double(c.orbit.upstream);
  if (c.orbit.theta_range) {
    out << YAML::Key << "theta_range" << YAML::Value;
    emit_list(out, {c.orbit.theta_range->first, c.orbit.theta_range->second}, Dimension::kAngle);
  }
  out << YAML::Key << "samples" << YAML::Value << c.orbit.samples;
  out << YAML::EndMap;

  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "arm_half_length" << YAML::Value
      << format_quantity(c.geometry.arm_half_length, Dimension::kLength);
  out << YAML::Key << "arm_height" << YAML::Value << format_quantity(c.geometry.arm_height, Dimension::kLength);
  out << YAML::Key << "wire_offset" << YAML::Value;
  emit_list(out, {c.geometry.wire_offset.x, c.geometry.wire_offset.y}, Dimension::kLength);
  out << YAML::Key << "wire_radius" << YAML::Value << format_quantity(c.geometry.wire_radius, Dimension::kLength);
  out << YAML::EndMap;

  out << YAML::Key << "wire" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "current_density_limit" << YAML::Value
      << format_quantity(c.wire.current_density_limit, Dimension::kCurrentDensity);
  out << YAML::EndMap;

  out << YAML::Key << "window" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "margin" << YAML::Value << format_double(c.window.margin);
  out << YAML::EndMap;

  out << YAML::Key << "interferometer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rho" << YAML::Value << std::string(to_string(c.interferometer.rho));
  out << YAML::Key << "adiabaticity_threshold" << YAML::Value
      << format_double(c.interferometer.adiabaticity_threshold);
  out << YAML::Key << "offset_scan" << YAML::Value;
  emit_list(out, c.interferometer.offset_scan, Dimension::kLength);
  out << YAML::EndMap;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "v" << YAML::Value;
  emit_list(out, c.sweep.v, Dimension::kSpeed);
  out << YAML::Key << "b" << YAML::Value;
  emit_list(out, c.sweep.b, Dimension::kLength);
  out << YAML::Key << "current" << YAML::Value;
  emit_list(out, c.sweep.current, Dimension::kCurrent);
  out << YAML::Key << "wire_offset_y" << YAML::Value;
  emit_list(out, c.sweep.wire_offset_y, Dimension::kLength);
  out << YAML::Key << "max_points" << YAML::Value << c.sweep.max_points;
  out << YAML::EndMap;

  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "orbit_relative" << YAML::Value << format_double(c.tolerances.orbit_relative);
  out << YAML::Key << "conservation" << YAML::Value << format_double(c.tolerances.conservation);
  out << YAML::Key << "spin" << YAML::Value << format_double(c.tolerances.spin);
  out << YAML::Key << "unitarity" << YAML::Value << format_double(c.tolerances.unitarity);
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << c.output.dir;
  out << YAML::Key << "format" << YAML::Value << std::string(to_string(c.output.format));
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.output.mode));
  out << YAML::Key << "jobs" << YAML::Value << c.output.jobs;
  out << YAML::Key << "timings" << YAML::Value << (c.output.timings ? "true" : "false");
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string_view to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kBoth: return "both";
  }
  return "both";
}

std::string_view to_string(ModeSelection m) noexcept {
  switch (m) {
    case ModeSelection::kAnalytic: return "analytic";
    case ModeSelection::kPropagated: return "propagated";
    case ModeSelection::kBoth: return "both";
  }
  return "both";
}

std::string_view to_string(InitialSpin s) noexcept {
  switch (s) {
    case InitialSpin::kUnpolarized: return "unpolarized";
    case InitialSpin::kPlus: return "plus";
    case InitialSpin::kMinus: return "minus";
    case InitialSpin::kUp: return "up";
    case InitialSpin::kDown: return "down";
  }
  return "unpolarized";
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  if (s == "both") return OutputFormat::kBoth;
  invalid("format must be csv, json or both");
}

ModeSelection parse_mode(std::string_view s) {
  if (s == "analytic") return ModeSelection::kAnalytic;
  if (s == "propagated") return ModeSelection::kPropagated;
  if (s == "both") return ModeSelection::kBoth;
  invalid("mode must be analytic, propagated or both");
}

}  // namespace planarspin::harness
