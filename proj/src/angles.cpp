#include "wqkd/angles.hpp"

#include <cmath>
#include <stdexcept>

namespace wqkd {

PolarizationAngle PolarizationAngle::from_radians(double rad) {
  if (!std::isfinite(rad)) {
    throw std::invalid_argument("polarization angle must be finite");
  }
  double r = std::fmod(rad, std::numbers::pi);
  if (r < 0.0) {
    r += std::numbers::pi;
  }
  if (r >= std::numbers::pi) {
    r = 0.0;
  }
  PolarizationAngle out;
  out.rad_ = r;
  return out;
}

}  // namespace wqkd
