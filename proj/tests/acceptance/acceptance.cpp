// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "planarspin/error.hpp"
#include "planarspin/interferometer.hpp"
#include "planarspin/orbit.hpp"
#include "planarspin/path.hpp"
#include "planarspin/transport.hpp"

using namespace planarspin;

namespace {

const PhysicalConstants kRounded = PhysicalConstants::rounded();
std::mt19937_64 gen(7);

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Running extremes for criterion 9, fed by every propagation and outcome below.
double g_worst_norm = 0.0;
double g_worst_sum = 0.0;
int g_propagations = 0;
int g_outcomes = 0;

void note(const TransportResult& r) {
  g_worst_norm = std::max(g_worst_norm, r.max_norm_error);
  ++g_propagations;
}

void note(const InterferenceOutcome& o) {
  g_worst_sum = std::max(g_worst_sum, std::abs(o.intensity_d1 + o.intensity_d2 - 1.0));
  ++g_outcomes;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Polyline star_loop(Vec2 center, double r_min, double r_max, int n, bool cw) {
  const double base = uniform(0, kTwoPi), gap = kTwoPi / n;
  Polyline loop;
  for (int i = 0; i < n; ++i) {
    const double a = base + (cw ? -1 : 1) * gap * (i + uniform(-0.4, 0.4));
    loop.push_back(center + uniform(r_min, r_max) * unit_radial(a));
  }
  loop.push_back(loop.front());
  return loop;
}

Polyline random_arm(double a, double side) {
  Polyline arm{{-a, 0.0}};
  const int n = 2 + static_cast<int>(uniform(0, 3));
  for (int i = 1; i <= n; ++i) arm.push_back({-a + 2 * a * i / (n + 1) + uniform(-0.02, 0.02), side * uniform(0.03, 0.2)});
  arm.push_back({a, 0.0});
  return arm;
}

Verdict window() {
  const auto w = current_window(2000.0, 0.1, kRounded);
  return {w.low >= 47 && w.low <= 60 && w.high >= 6.3e11 && w.high <= 7.6e11,
          fmt("I_low = %.4g A in [47, 60], I_high = %.4g A in [6.3e11, 7.6e11]", w.low, w.high)};
}

Verdict feasibility() {
  const double i = wire_feasibility(500.0e4, 0.005);
  return {std::abs(i - 393.0) <= 0.05 * 393.0, fmt("I = %.4g A vs 393 A +- 5%%", i)};
}

Verdict quantization() {
  double worst_in = 0.0, worst_out = 0.0;
  int n_in = 0, n_out = 0;
  for (int k = 0; k < 20; ++k) {
    const auto loop = star_loop({uniform(-0.01, 0.01), uniform(-0.01, 0.01)}, 0.03, 0.4, 6 + k % 7, k % 2);
    const int w = winding_number(loop);
    if (std::abs(w) != 1) continue;
    worst_in = std::max(worst_in, std::abs(std::remainder(line_integral_connection(loop) - kPi, kTwoPi)));
    ++n_in;
  }
  for (int k = 0; k < 20; ++k) {
    const double d = uniform(0.5, 2.0), phi = uniform(0, kTwoPi);
    const auto loop = star_loop(d * unit_radial(phi), 0.05, 0.4, 5 + k % 7, k % 2);
    if (winding_number(loop) != 0) continue;
    worst_out = std::max(worst_out, std::abs(std::remainder(line_integral_connection(loop), kTwoPi)));
    ++n_out;
  }
  return {n_in >= 10 && n_out >= 10 && worst_in < 1e-8 && worst_out < 1e-8,
          fmt("%d enclosing loops: max |phase - pi| = %.2e; %d outside: max |phase| = %.2e", n_in, worst_in, n_out,
              worst_out)};
}

Verdict orbit_oracle() {
  double worst_r = 0.0, worst_e = 0.0, worst_l = 0.0, eps_lo = 1e300, eps_hi = 0.0;
  for (int k = 0; k < 20; ++k) {
    // One draw per log-stratum so the set spans 1.5 .. 1e10.
    const double lo = std::log(1.5), hi = std::log(1e10);
    const double eps = k == 0 ? 1.5 : k == 19 ? 1e10 : std::exp(lo + (hi - lo) * (k + uniform(0.0, 1.0)) / 20.0);
    OrbitParams p;
    p.v = uniform(300, 3000);
    p.b = uniform(0.03, 0.2);
    p.branch = k % 2 ? SpinBranch::kPlus : SpinBranch::kMinus;
    p.current = kRounded.m_n * p.v * p.v * p.b / (kRounded.c0() * std::sqrt(eps * eps - 1));
    const auto traj = integrate_orbit(p, kRounded);
    const auto conic = conic_orbit(p, kRounded);
    for (const auto& s : traj.samples)
      worst_r = std::max(worst_r, std::abs(conic.radius(s.state.theta) - s.state.r) / s.state.r);
    worst_e = std::max(worst_e, traj.max_energy_drift());
    worst_l = std::max(worst_l, traj.max_angular_momentum_drift());
    eps_lo = std::min(eps_lo, eps);
    eps_hi = std::max(eps_hi, eps);
  }
  return {worst_r < 1e-8 && worst_e < 1e-9 && worst_l < 1e-9,
          fmt("20 draws, eps in [%.3g, %.3g]: max rel r error %.2e, E drift %.2e, L drift %.2e", eps_lo, eps_hi,
              worst_r, worst_e, worst_l)};
}

Verdict adiabatic_equivalence() {
  double worst = 0.0;
  int n = 0;
  while (n < 1000) {
    const auto p = PlanarState::from_cartesian({uniform(-0.5, 0.5), uniform(-0.5, 0.5)},
                                               {uniform(-3000, 3000), uniform(-3000, 3000)});
    if (p.r < 0.006) continue;
    const double current = std::exp(uniform(std::log(10.0), std::log(1e5)));
    const auto m = matrix_element_check(p, current, kRounded);
    const double closed = adiabaticity_functional(p, current, kRounded);
    worst = std::max(worst, closed == 0.0 ? m.adiabatic_quotient : std::abs(m.adiabatic_quotient - closed) / closed);
    ++n;
  }
  return {worst < 1e-10, fmt("1000 points: max relative difference %.2e", worst)};
}

Verdict interference() {
  const auto g = build_geometry(0.2, 0.1);
  const auto rho = DensityMatrix::unpolarized();
  ExperimentOptions opt;
  opt.spin.record_history = false;
  const auto a = full_experiment(g, 400.0, 2000.0, rho, kRounded, ExperimentMode::kAnalytic, opt);
  const auto p400 = full_experiment(g, 400.0, 2000.0, rho, kRounded, ExperimentMode::kPropagated, opt);
  const auto p4000 = full_experiment(g, 4000.0, 2000.0, rho, kRounded, ExperimentMode::kPropagated, opt);
  for (const auto* o : {&a, &p400, &p4000}) note(*o);
  return {a.intensity_d1 == 0.0 && p400.intensity_d1 < 0.05 && p4000.intensity_d1 < p400.intensity_d1,
          fmt("analytic I_D1 = %g; propagated I_D1 = %.3e at 400 A, %.3e at 4000 A", a.intensity_d1,
              p400.intensity_d1, p4000.intensity_d1)};
}

Verdict dynamical_cancellation() {
  double worst = 0.0;
  int runs = 0;
  for (int k = 0; k < 5; ++k) {
    const auto g = build_geometry(uniform(0.1, 0.4), uniform(0.05, 0.2), {uniform(-0.05, 0.05), 0.0},
                                  kDefaultWireRadius);
    for (int j = 0; j <= 30; ++j) {
      const double current = 10.0 * std::pow(10.0, 3.0 * j / 30);
      const auto l = loop_unitary(g, current, 2000.0, kRounded);
      worst = std::max({worst, std::abs(l.dynamical_mismatch[0]), std::abs(l.dynamical_mismatch[1])});
      ++runs;
    }
  }
  return {worst < 1e-12, fmt("%d symmetric runs, 10 A .. 10 kA: max |mismatch| = %.2e rad", runs, worst)};
}

Verdict robustness() {
  const double reference = loop_unitary(build_geometry(0.2, 0.1), 400.0, 2000.0, kRounded).loop_geometric;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto g = make_geometry(random_arm(0.2, 1.0), random_arm(0.2, -1.0), {uniform(-0.1, 0.1), 0.0});
    const auto l = loop_unitary(g, 400.0, 2000.0, kRounded);
    worst = std::max(worst, std::abs(std::remainder(l.loop_geometric - reference, kTwoPi)));
  }
  return {worst < 1e-8, fmt("10 deformations: max loop phase change %.2e rad", worst)};
}

Verdict unitarity() {
  // Extra propagations beyond those already run: orbit passes and asymmetric interferometers.
  for (double current : {40.0, 400.0, 4000.0}) {
    OrbitParams p;
    p.current = current;
    const auto traj = integrate_orbit(p, kRounded);
    for (auto b : {SpinBranch::kPlus, SpinBranch::kMinus}) {
      const auto f = local_eigenframe(traj.samples.front().state);
      note(propagate_spin(traj, b == SpinBranch::kPlus ? f.plus : f.minus, current, kRounded));
    }
  }
  for (int k = 0; k < 4; ++k) {
    const auto g = make_geometry(random_arm(0.2, 1.0), random_arm(0.2, -1.0), {uniform(-0.05, 0.05), uniform(-0.01, 0.01)});
    for (auto mode : {ExperimentMode::kAnalytic, ExperimentMode::kPropagated}) {
      note(full_experiment(g, 400.0, 2000.0, DensityMatrix::unpolarized(), kRounded, mode));
      note(full_experiment(g, 400.0, 2000.0, DensityMatrix::pure({1.0, 0.0}), kRounded, mode));
    }
  }
  return {g_worst_norm < 1e-10 && g_worst_sum <= 1e-12,
          fmt("%d orbit propagations: max norm error %.2e (arm propagations are gated internally); %d outcomes: max |I_D1 + I_D2 - 1| = %.2e", g_propagations,
              g_worst_norm, g_outcomes, g_worst_sum)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double budget;  // seconds
  };
  const std::vector<Criterion> criteria{
      {1, "current window", window, 1.0},
      {2, "wire feasibility", feasibility, 1.0},
      {3, "loop Berry phase quantization", quantization, 1.0},
      {4, "orbit oracle equivalence", orbit_oracle, 10.0},
      {5, "adiabatic formula equivalence", adiabatic_equivalence, 1.0},
      {6, "destructive interference", interference, 60.0},
      {7, "dynamical phase cancellation", dynamical_cancellation, 5.0},
      {8, "topological robustness", robustness, 5.0},
      {9, "unitarity and normalization", unitarity, 60.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const Error& e) {
      v = {false, std::string("error [") + std::string(to_string(e.kind())) + "]: " + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.budget;
    const bool ok = v.pass && in_time;
    if (!ok) ++failed;
    std::printf("[%s] %d. %s: %s (%.3f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), dt,
                c.budget);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
