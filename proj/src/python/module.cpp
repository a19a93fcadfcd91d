#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "planarspin/error.hpp"
#include "planarspin/field.hpp"
#include "planarspin/interferometer.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/path.hpp"
#include "planarspin/transport.hpp"
#include "planarspin/version.hpp"

namespace py = pybind11;
using namespace planarspin;

namespace {

using Point = std::pair<double, double>;

Polyline to_polyline(const std::vector<Point>& pts) {
  Polyline out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

Point to_point(Vec2 v) { return {v.x, v.y}; }

py::list matrix(const Mat2& m) {
  py::list rows;
  rows.append(py::make_tuple(m.m00, m.m01));
  rows.append(py::make_tuple(m.m10, m.m11));
  return rows;
}

SpinBranch branch_from(const std::string& s) {
  if (s == "plus" || s == "+") return SpinBranch::kPlus;
  if (s == "minus" || s == "-") return SpinBranch::kMinus;
  throw Error(ErrorKind::kValidation, "branch must be 'plus' or 'minus'");
}

DensityMatrix rho_from(const std::string& s) {
  if (s == "unpolarized") return DensityMatrix::unpolarized();
  if (s == "up") return DensityMatrix::pure({1.0, 0.0});
  if (s == "down") return DensityMatrix::pure({0.0, 1.0});
  if (s == "plus") return DensityMatrix::pure(local_eigenframe(kPi).plus);
  if (s == "minus") return DensityMatrix::pure(local_eigenframe(kPi).minus);
  throw Error(ErrorKind::kValidation, "rho must be unpolarized, up, down, plus or minus");
}

ExperimentMode mode_from(const std::string& s) {
  if (s == "analytic") return ExperimentMode::kAnalytic;
  if (s == "propagated") return ExperimentMode::kPropagated;
  throw Error(ErrorKind::kValidation, "mode must be 'analytic' or 'propagated'");
}

py::dict trajectory_dict(const Trajectory& traj) {
  std::vector<double> t, x, y, r, theta, vx, vy;
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    x.push_back(s.state.x);
    y.push_back(s.state.y);
    r.push_back(s.state.r);
    theta.push_back(s.state.theta);
    vx.push_back(s.state.vx);
    vy.push_back(s.state.vy);
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["y"] = y;
  d["r"] = r;
  d["theta"] = theta;
  d["vx"] = vx;
  d["vy"] = vy;
  d["energy_drift"] = traj.max_energy_drift();
  d["angular_momentum_drift"] = traj.max_angular_momentum_drift();
  return d;
}

py::handle g_error_type;

}  // namespace

PYBIND11_MODULE(_planarspin, m) {
  m.doc() = "Planar spin transport around a current-carrying wire";
  m.attr("__version__") = std::string(kVersion);

  g_error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(g_error_type)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(g_error_type.ptr(), inst.ptr());
    }
  });

  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init<>())
      .def_readwrite("hbar", &PhysicalConstants::hbar)
      .def_readwrite("m_n", &PhysicalConstants::m_n)
      .def_readwrite("mu", &PhysicalConstants::mu)
      .def_readwrite("mu0", &PhysicalConstants::mu0)
      .def_property_readonly("c0", &PhysicalConstants::c0)
      .def_static("rounded", &PhysicalConstants::rounded)
      .def_static("codata", &PhysicalConstants::codata);

  py::enum_<SpinBranch>(m, "SpinBranch").value("plus", SpinBranch::kPlus).value("minus", SpinBranch::kMinus);
  py::enum_<LaunchMode>(m, "LaunchMode")
      .value("asymptotic", LaunchMode::kAsymptotic)
      .value("horizontal", LaunchMode::kHorizontal);

  py::class_<OrbitParams>(m, "OrbitParams")
      .def(py::init([](double v, double b, double current, const std::string& branch, LaunchMode launch,
                       double upstream, double wire_radius) {
             OrbitParams p{v, b, current, branch_from(branch), launch, upstream, wire_radius};
             p.validate();
             return p;
           }),
           py::arg("v") = 2000.0, py::arg("b") = 0.1, py::arg("current") = 400.0, py::arg("branch") = "plus",
           py::arg("launch") = LaunchMode::kAsymptotic, py::arg("upstream") = 20.0,
           py::arg("wire_radius") = kDefaultWireRadius)
      .def_readwrite("v", &OrbitParams::v)
      .def_readwrite("b", &OrbitParams::b)
      .def_readwrite("current", &OrbitParams::current)
      .def_readwrite("branch", &OrbitParams::branch)
      .def_readwrite("launch", &OrbitParams::launch)
      .def_readwrite("upstream", &OrbitParams::upstream)
      .def_readwrite("wire_radius", &OrbitParams::wire_radius);

  m.def("eccentricity", &eccentricity, py::arg("params"), py::arg("consts") = PhysicalConstants::rounded());

  m.def(
      "current_window",
      [](double v, double b, const PhysicalConstants& c, double margin) {
        const auto w = current_window(v, b, c, margin);
        return py::dict(py::arg("low") = w.low, py::arg("high") = w.high, py::arg("ratio") = w.ratio());
      },
      py::arg("v"), py::arg("b"), py::arg("consts") = PhysicalConstants::rounded(), py::arg("margin") = 1.0);
  m.def("wire_feasibility", &wire_feasibility, py::arg("current_density_limit"), py::arg("wire_radius"));

  py::class_<ConicOrbit>(m, "ConicOrbit")
      .def_property_readonly("eccentricity", &ConicOrbit::eccentricity)
      .def_property_readonly("semi_latus_rectum", &ConicOrbit::semi_latus_rectum)
      .def_property_readonly("periapsis", &ConicOrbit::periapsis)
      .def_property_readonly("axis", &ConicOrbit::axis)
      .def("radius", &ConicOrbit::radius, py::arg("theta"))
      .def("defined_at", &ConicOrbit::defined_at, py::arg("theta"))
      .def("asymptotes", &ConicOrbit::asymptotes);
  m.def("conic_orbit", &conic_orbit, py::arg("params"), py::arg("consts") = PhysicalConstants::rounded());

  m.def(
      "integrate_orbit",
      [](const OrbitParams& p, const PhysicalConstants& c, double rtol, double conservation) {
        OrbitTolerances tol;
        tol.relative = rtol;
        tol.conservation = conservation;
        return trajectory_dict(integrate_orbit(p, c, 0.0, tol));
      },
      py::arg("params"), py::arg("consts") = PhysicalConstants::rounded(), py::arg("rtol") = 1e-12,
      py::arg("conservation") = 1e-9);

  m.def(
      "line_integral_connection",
      [](const std::vector<Point>& path, double wire_radius) {
        return line_integral_connection(to_polyline(path), wire_radius);
      },
      py::arg("path"), py::arg("wire_radius") = kDefaultWireRadius);
  m.def(
      "winding_number",
      [](const std::vector<Point>& path, double wire_radius) { return winding_number(to_polyline(path), wire_radius); },
      py::arg("path"), py::arg("wire_radius") = kDefaultWireRadius);

  m.def(
      "adiabaticity_functional",
      [](Point pos, Point vel, double current, const PhysicalConstants& c) {
        return adiabaticity_functional(PlanarState::from_cartesian({pos.first, pos.second}, {vel.first, vel.second}),
                                       current, c);
      },
      py::arg("position"), py::arg("velocity"), py::arg("current"), py::arg("consts") = PhysicalConstants::rounded());
  m.def(
      "matrix_element_check",
      [](Point pos, Point vel, double current, const PhysicalConstants& c) {
        const auto r = matrix_element_check(
            PlanarState::from_cartesian({pos.first, pos.second}, {vel.first, vel.second}), current, c);
        return py::dict(py::arg("closed_form") = r.closed_form, py::arg("numeric") = r.numeric,
                        py::arg("gap_squared") = r.gap_squared, py::arg("relative_difference") = r.relative_difference,
                        py::arg("adiabatic_quotient") = r.adiabatic_quotient);
      },
      py::arg("position"), py::arg("velocity"), py::arg("current"), py::arg("consts") = PhysicalConstants::rounded());

  m.def(
      "propagate_orbit_spin",
      [](const OrbitParams& p, const PhysicalConstants& c, double tolerance) {
        const auto traj = integrate_orbit(p, c);
        SpinStepControl control;
        control.tolerance = tolerance;
        control.wire_radius = p.wire_radius;
        control.record_history = false;
        const auto start = local_eigenframe(traj.samples.front().state);
        const auto res = propagate_spin(traj, p.branch == SpinBranch::kPlus ? start.plus : start.minus, p.current,
                                        c, control);
        const auto& b = res.branches[branch_index(p.branch)];
        return py::dict(py::arg("final_fidelity") = b.final_fidelity,
                        py::arg("dynamical_phase") = b.dynamical_phase,
                        py::arg("geometric_phase") = b.geometric_phase,
                        py::arg("adiabaticity_max") = res.adiabaticity_max,
                        py::arg("max_norm_error") = res.max_norm_error, py::arg("steps") = res.steps);
      },
      py::arg("params"), py::arg("consts") = PhysicalConstants::rounded(), py::arg("tolerance") = 1e-10);

  py::class_<InterferometerGeometry>(m, "InterferometerGeometry")
      .def_property_readonly("p", [](const InterferometerGeometry& g) { return to_point(g.p); })
      .def_property_readonly("q", [](const InterferometerGeometry& g) { return to_point(g.q); })
      .def_property_readonly("wire_position", [](const InterferometerGeometry& g) { return to_point(g.wire_position); })
      .def("symmetric", &InterferometerGeometry::symmetric, py::arg("tol") = 1e-12)
      .def("winding", &InterferometerGeometry::winding)
      .def("loop", [](const InterferometerGeometry& g) {
        std::vector<Point> out;
        for (const auto& v : g.loop()) out.push_back(to_point(v));
        return out;
      });
  m.def(
      "build_geometry",
      [](double a, double h, Point offset, double wire_radius) {
        return build_geometry(a, h, {offset.first, offset.second}, wire_radius);
      },
      py::arg("arm_half_length") = 0.2, py::arg("arm_height") = 0.1, py::arg("wire_offset") = Point{0.0, 0.0},
      py::arg("wire_radius") = kDefaultWireRadius);

  m.def(
      "loop_unitary",
      [](const InterferometerGeometry& g, double current, double v, const PhysicalConstants& c) {
        const auto l = loop_unitary(g, current, v, c);
        return py::dict(py::arg("unitary") = matrix(l.unitary), py::arg("loop_geometric") = l.loop_geometric,
                        py::arg("dynamical_mismatch") = l.dynamical_mismatch,
                        py::arg("branch_phase") = l.branch_phase, py::arg("winding") = l.winding);
      },
      py::arg("geometry"), py::arg("current"), py::arg("v"), py::arg("consts") = PhysicalConstants::rounded());

  m.def(
      "full_experiment",
      [](const InterferometerGeometry& g, double current, double v, const std::string& rho, const std::string& mode,
         const PhysicalConstants& c) {
        ExperimentOptions options;
        options.spin.record_history = false;
        options.spin.wire_radius = g.wire_radius;
        const auto out = full_experiment(g, current, v, rho_from(rho), c, mode_from(mode), options);
        return py::dict(py::arg("loop_phase") = out.loop_phase, py::arg("trace_rho_u") = out.trace_rho_u,
                        py::arg("I_D1") = out.intensity_d1, py::arg("I_D2") = out.intensity_d2,
                        py::arg("visibility") = out.visibility, py::arg("adiabaticity_max") = out.adiabaticity_max,
                        py::arg("loop_unitary") = matrix(out.loop_unitary), py::arg("warnings") = out.warnings);
      },
      py::arg("geometry"), py::arg("current"), py::arg("v"), py::arg("rho") = "unpolarized",
      py::arg("mode") = "analytic", py::arg("consts") = PhysicalConstants::rounded());
}
