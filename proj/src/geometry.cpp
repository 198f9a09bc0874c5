#include "crac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crac {

DatabaseBits::DatabaseBits(int a, int b) {
  if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
    throw ContractViolation("database bits must be 0 or 1");
  }
  x_a = static_cast<std::uint8_t>(a);
  x_b = static_cast<std::uint8_t>(b);
}

DatabaseBits DatabaseBits::from_index(int index) {
  if (index < 0 || index > 3) throw ContractViolation("database index out of range");
  return {index / 2, index % 2};
}

double Arc::position(double angle) const {
  const double offset = normalize_angle(angle - start);
  if (offset <= length) return offset / length;
  // Outside by rounding: snap to whichever end is closer around the circle.
  return (offset - length) < (kTwoPi - offset) ? 1.0 : 0.0;
}

QuadrantPartition::QuadrantPartition(EquatorDirection axis_a, EquatorDirection axis_b)
    : axis_a_(axis_a), axis_b_(axis_b) {
  if (std::abs(std::sin(axis_b.angle() - axis_a.angle())) <= kStructuralTol) {
    throw ContractViolation("quadrant partition needs non-parallel axes");
  }
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::array<double, 4> cuts = {
      normalize_angle(axis_a.angle() + half_pi), normalize_angle(axis_a.angle() - half_pi),
      normalize_angle(axis_b.angle() + half_pi), normalize_angle(axis_b.angle() - half_pi)};
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < 4; ++i) {
    const double start = cuts[i];
    double end = cuts[(i + 1) % 4];
    if (i == 3) end += kTwoPi;
    const Arc arc{start, end - start};
    const DatabaseBits bits = database_bits(EquatorDirection(arc.at(0.5)), *this);
    arcs_[static_cast<std::size_t>(bits.index())] = arc;
  }
}

Arc QuadrantPartition::arc(DatabaseBits bits) const {
  return arcs_[static_cast<std::size_t>(bits.index())];
}

QubitState phase_state(EquatorDirection phi) {
  const double s = 1.0 / std::numbers::sqrt2;
  Ket<1> v;
  v << s, s * std::polar(1.0, phi.angle());
  return QubitState::normalized(v);
}

QubitState orthogonal_state(EquatorDirection phi) {
  const double s = 1.0 / std::numbers::sqrt2;
  Ket<1> v;
  v << s, -s * std::polar(1.0, phi.angle());
  return QubitState::normalized(v);
}

int heaviside(double z) { return z > 0.0 ? 1 : 0; }

DatabaseBits database_bits(EquatorDirection phi, const QuadrantPartition& part) {
  // cos(pi/2) evaluates to 6e-17; a direction on a cut must still land on the
  // x_w = 1 side.
  auto snapped = [](double z) { return std::abs(z) <= kStructuralTol ? 0.0 : z; };
  return {1 - heaviside(snapped(phi.dot(part.axis_a()))),
          1 - heaviside(snapped(phi.dot(part.axis_b())))};
}

EquatorDirection sample_in_quadrant(DatabaseBits bits, const QuadrantPartition& part,
                                    RandomStream& rng) {
  const Arc arc = part.arc(bits);
  // Interior points can still round onto a neighbouring quadrant within an ulp
  // of a cut; those draws are repeated.
  for (;;) {
    const EquatorDirection phi(arc.at(rng.uniform_open()));
    if (database_bits(phi, part) == bits) return phi;
  }
}

EquatorDirection quadrant_representative(EquatorDirection anchor, DatabaseBits target,
                                         const QuadrantPartition& part) {
  const DatabaseBits own = database_bits(anchor, part);
  if (target == own) return anchor;
  if (target == own.complement()) return anchor.opposite();
  const double t = part.arc(own).position(anchor.angle());
  return EquatorDirection(part.arc(target).at(1.0 - t));
}

}  // namespace crac
