#include "planarspin/error.hpp"

namespace planarspin {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kSingularity: return "singularity";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kWireCollision: return "wire_collision";
    case ErrorKind::kTolerance: return "tolerance";
    case ErrorKind::kEmptyWindow: return "empty_window";
    case ErrorKind::kOpenPath: return "open_path";
    case ErrorKind::kGeometry: return "geometry";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kStepFailure: return "step_failure";
    case ErrorKind::kNonUnitary: return "non_unitary";
  }
  return "unknown";
}

}  // namespace planarspin
