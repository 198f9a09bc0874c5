#include "crac/equator_direction.hpp"

#include <cmath>

#include "crac/qcore.hpp"

namespace crac {

double normalize_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw ContractViolation("angle must be finite");
  }
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

EquatorDirection::EquatorDirection(double radians) : angle_(normalize_angle(radians)) {}

double EquatorDirection::x() const { return std::cos(angle_); }
double EquatorDirection::y() const { return std::sin(angle_); }

double EquatorDirection::dot(const EquatorDirection& other) const {
  return std::cos(angle_ - other.angle_);
}

}  // namespace crac
