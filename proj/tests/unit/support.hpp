#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "planarspin/path.hpp"
#include "planarspin/planar.hpp"

namespace test_support {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }
inline double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

template <class F>
double integrate(F f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &err);
}

/// Reference value of the integral of ds / r along a polyline (wire at the origin).
inline double quad_inverse_distance(const planarspin::Polyline& path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto a = path[i], b = path[i + 1];
    const double len = planarspin::norm(b - a);
    total += integrate(
        [&](double s) {
          const auto p = a + (s / len) * (b - a);
          return 1.0 / planarspin::norm(p);
        },
        0.0, len);
  }
  return total;
}

/// Reference value of the integral of A . dr with A = -e_theta / (2 r).
inline double quad_connection(const planarspin::Polyline& path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto a = path[i], d = path[i + 1] - path[i];
    total += integrate(
        [&](double u) {
          const auto p = a + u * d;
          return -0.5 * planarspin::cross(p, d) / planarspin::dot(p, p);
        },
        0.0, 1.0);
  }
  return total;
}

/// Star-shaped closed polygon around `center`; clockwise when `cw`.
inline planarspin::Polyline random_loop(planarspin::Vec2 center, double r_min, double r_max, int vertices, bool cw) {
  std::vector<double> angles;
  const double base = uniform(0.0, planarspin::kTwoPi), gap = planarspin::kTwoPi / vertices;
  for (int i = 0; i < vertices; ++i) angles.push_back(base + gap * (i + uniform(-0.4, 0.4)));
  if (cw) std::reverse(angles.begin(), angles.end());
  planarspin::Polyline loop;
  for (double a : angles) {
    const double r = uniform(r_min, r_max);
    loop.push_back(center + r * planarspin::unit_radial(a));
  }
  loop.push_back(loop.front());
  return loop;
}

}  // namespace test_support
