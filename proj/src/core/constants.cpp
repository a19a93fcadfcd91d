#include "planarspin/constants.hpp"

#include "planarspin/error.hpp"

namespace planarspin {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0)) throw Error(ErrorKind::kValidation, "hbar must be positive");
  if (!(m_n > 0.0)) throw Error(ErrorKind::kValidation, "neutron mass must be positive");
  if (!(mu < 0.0)) throw Error(ErrorKind::kValidation, "neutron magnetic moment must be negative");
  if (!(mu0 > 0.0)) throw Error(ErrorKind::kValidation, "mu0 must be positive");
}

}  // namespace planarspin
