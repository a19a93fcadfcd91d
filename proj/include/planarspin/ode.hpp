#pragma once

// Dormand-Prince 5(4) with Hairer's continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "planarspin/error.hpp"

namespace planarspin::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct AdaptiveOptions {
  double rtol = 1e-12;
  State<N> atol{};
  double initial_step = 0.0;  // 0: a fraction of the span
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 10'000'000;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Continuous extension over one accepted step, 4th order in theta = (t - t0) / h.
template <std::size_t N>
class DenseStep {
 public:
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> rcont{};

  State<N> operator()(double t) const noexcept {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i)
      y[i] = rcont[0][i] + s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    return y;
  }
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0). After each accepted step
/// `observer(t, y, dense)` is called; it may throw to abort.
template <std::size_t N, class Rhs, class Observer>
IntegrationStats integrate_dopri5(Rhs&& f, double t0, State<N> y, double t1, const AdaptiveOptions<N>& opt,
                                  Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  IntegrationStats stats;
  const double span = t1 - t0;
  if (!(span > 0.0)) return stats;

  double h = opt.initial_step > 0.0 ? opt.initial_step : 1e-3 * span;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  auto combine = [](const State<N>& base, double hh, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = base;
    for (const auto& [coef, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += hh * coef * (*k)[i];
    return out;
  };

  double t = t0;
  State<N> k1 = f(t, y);
  ++stats.rhs_evaluations;
  bool last_rejected = false;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw Error(ErrorKind::kStepFailure, "ODE integration exceeded " + std::to_string(opt.max_steps) + " steps");
    if (t + h > t1) h = t1 - t;
    if (h <= std::abs(t) * 1e-15)
      throw Error(ErrorKind::kStepFailure, "ODE step size underflow at t = " + std::to_string(t));

    const State<N> y2 = combine(y, h, {{a21, &k1}});
    const State<N> k2 = f(t + c2 * h, y2);
    const State<N> y3 = combine(y, h, {{a31, &k1}, {a32, &k2}});
    const State<N> k3 = f(t + c3 * h, y3);
    const State<N> y4 = combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const State<N> k4 = f(t + c4 * h, y4);
    const State<N> y5 = combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const State<N> k5 = f(t + c5 * h, y5);
    const State<N> y6 = combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const State<N> k6 = f(t + h, y6);
    const State<N> y_new = combine(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const State<N> k7 = f(t + h, y_new);
    stats.rhs_evaluations += 6;

    double err_sq = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol[i] + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_sq += (e / sc) * (e / sc);
    }
    const double err = std::sqrt(err_sq / static_cast<double>(N));

    if (std::isfinite(err) && err <= 1.0) {
      DenseStep<N> dense;
      dense.t0 = t;
      dense.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.rcont[0][i] = y[i];
        dense.rcont[1][i] = ydiff;
        dense.rcont[2][i] = bspl;
        dense.rcont[3][i] = ydiff - h * k7[i] - bspl;
        dense.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = (t + h >= t1) ? t1 : t + h;
      y = y_new;
      k1 = k7;
      ++stats.accepted;
      observer(t, static_cast<const State<N>&>(y), static_cast<const DenseStep<N>&>(dense));

      double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h *= fac;
      last_rejected = false;
    } else {
      ++stats.rejected;
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.2;
      h *= fac;
      last_rejected = true;
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return stats;
}

}  // namespace planarspin::ode
