#pragma once

#include <array>
#include <cstdint>

#include "crac/equator_direction.hpp"
#include "crac/qcore.hpp"
#include "crac/random_stream.hpp"

namespace crac {

/// Alice's two-bit database x_A x_B.
struct DatabaseBits {
  std::uint8_t x_a = 0;
  std::uint8_t x_b = 0;

  DatabaseBits() = default;
  DatabaseBits(int a, int b);

  /// 2 * x_a + x_b
  int index() const { return 2 * x_a + x_b; }
  static DatabaseBits from_index(int index);

  DatabaseBits complement() const { return {1 - x_a, 1 - x_b}; }

  friend bool operator==(const DatabaseBits&, const DatabaseBits&) = default;
};

inline constexpr std::array<DatabaseBits, 4> all_database_bits() {
  std::array<DatabaseBits, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[static_cast<std::size_t>(i)].x_a = static_cast<std::uint8_t>(i / 2);
    out[static_cast<std::size_t>(i)].x_b = static_cast<std::uint8_t>(i % 2);
  }
  return out;
}

/// Half-open or closed arc of the equator, start + t * length for t in [0, 1].
struct Arc {
  double start = 0.0;
  double length = 0.0;

  double at(double t) const { return start + t * length; }
  /// Relative position of an angle along the arc (unwrapped from start).
  double position(double angle) const;
};

/// The two measurement axes and the four-way split of the equator they induce.
///
/// Throws ContractViolation when the axes are parallel or antiparallel
/// (|sin(b - a)| <= 1e-12), because two quadrants would then be empty.
class QuadrantPartition {
 public:
  QuadrantPartition(EquatorDirection axis_a, EquatorDirection axis_b);

  EquatorDirection axis_a() const { return axis_a_; }
  EquatorDirection axis_b() const { return axis_b_; }

  /// Arc of quadrant Q_{x_a x_b}, oriented counter-clockwise. Membership of the
  /// endpoints follows the Heaviside convention and is decided by database_bits.
  Arc arc(DatabaseBits bits) const;

 private:
  EquatorDirection axis_a_;
  EquatorDirection axis_b_;
  std::array<Arc, 4> arcs_{};
};

/// (|0> + e^{i phi}|1>) / sqrt 2
QubitState phase_state(EquatorDirection phi);
/// (|0> - e^{i phi}|1>) / sqrt 2
QubitState orthogonal_state(EquatorDirection phi);

/// Theta(z) = 1 for z > 0, 0 for z <= 0.
int heaviside(double z);

/// x_w = 1 - Theta(phi . w) for w in {a, b}. Dot products within 1e-12 of zero
/// count as zero, so directions on a cut get x_w = 1.
DatabaseBits database_bits(EquatorDirection phi, const QuadrantPartition& part);

/// Uniform draw from the arc of quadrant `bits`.
EquatorDirection sample_in_quadrant(DatabaseBits bits, const QuadrantPartition& part,
                                    RandomStream& rng);

/// Representative direction for quadrant `target` derived from an anchor
/// direction: the anchor's relative arc position is carried over, with the
/// orientation reversed for quadrants adjacent to the anchor's own quadrant.
/// The antipodal quadrant receives anchor + pi. For orthogonal axes this is
/// the reflection that preserves |a.phi| and |b.phi|.
EquatorDirection quadrant_representative(EquatorDirection anchor, DatabaseBits target,
                                         const QuadrantPartition& part);

}  // namespace crac
