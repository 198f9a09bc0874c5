#pragma once

#include <numbers>

namespace crac {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle into [0, 2pi).
double normalize_angle(double radians);

/// A unit vector in the x-y plane of the Bloch sphere, stored as its azimuth.
///
/// Used both for measurement axes and for the encoding direction of an
/// equatorial phase state. The angle is canonicalized into [0, 2pi) on
/// construction, so two directions compare equal iff their stored angles do.
class EquatorDirection {
 public:
  EquatorDirection() = default;
  explicit EquatorDirection(double radians);

  double angle() const { return angle_; }
  double x() const;
  double y() const;

  /// Euclidean dot product of the two unit vectors, cos(angle difference).
  double dot(const EquatorDirection& other) const;

  EquatorDirection rotated(double radians) const { return EquatorDirection(angle_ + radians); }
  EquatorDirection opposite() const { return rotated(std::numbers::pi); }

  friend bool operator==(const EquatorDirection&, const EquatorDirection&) = default;

 private:
  double angle_ = 0.0;
};

}  // namespace crac
