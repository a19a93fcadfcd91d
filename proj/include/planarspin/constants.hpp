#pragma once

#include <cmath>
#include <numbers>

namespace planarspin {

/// Wire exclusion radius used by every path operation unless overridden (0.5 cm copper wire).
inline constexpr double kDefaultWireRadius = 5e-3;

/// SI constants entering the model. `mu` is signed (negative for the neutron).
struct PhysicalConstants {
  double hbar = 1.054571817e-34;  // J s
  double m_n = 1.67492749804e-27;  // kg
  double mu = -9.65e-27;           // J/T
  double mu0 = 4e-7 * std::numbers::pi;  // V s / (A m)

  /// Coupling C0 = |mu| mu0 / (4 pi), so that the Zeeman levels are +-C0 I / r.
  double c0() const noexcept { return std::abs(mu) * mu0 / (4.0 * std::numbers::pi); }

  /// Neutron moment rounded to -9.65e-27 J/T (the defaults above).
  static PhysicalConstants rounded() noexcept { return {}; }

  /// CODATA 2018 values.
  static PhysicalConstants codata() noexcept {
    return {1.054571817e-34, 1.67492749804e-27, -9.6623651e-27, 1.25663706212e-6};
  }

  /// Throws Error(kValidation) unless hbar, m_n, mu0 > 0 and mu < 0.
  void validate() const;

  bool operator==(const PhysicalConstants&) const = default;
};

}  // namespace planarspin
