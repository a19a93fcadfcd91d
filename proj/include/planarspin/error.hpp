#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planarspin {

enum class ErrorKind {
  kSingularity,    // evaluation at (or inside) the wire
  kRange,          // request outside the domain of a closed-form solution
  kWireCollision,  // an integrated orbit entered the wire exclusion disk
  kTolerance,      // conservation or unitarity gate failed
  kEmptyWindow,    // current window cannot satisfy the requested margin
  kOpenPath,
  kGeometry,
  kValidation,
  kStepFailure,
  kNonUnitary,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

std::string_view to_string(ErrorKind kind) noexcept;

}  // namespace planarspin
