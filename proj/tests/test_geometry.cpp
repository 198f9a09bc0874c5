#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

#include "crac/geometry.hpp"
#include "oracles.hpp"

using namespace crac;

constexpr double kPi = std::numbers::pi;

TEST_CASE("angles are normalized into [0, 2pi)") {
  CHECK(normalize_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(normalize_angle(2 * kPi) == doctest::Approx(0.0));
  CHECK(normalize_angle(7.0) == doctest::Approx(7.0 - 2 * kPi));
  CHECK_THROWS_AS(EquatorDirection(std::numeric_limits<double>::infinity()), ContractViolation);
  CHECK(EquatorDirection(-kPi) == EquatorDirection(kPi));
  CHECK(EquatorDirection(0.3).dot(EquatorDirection(1.1)) == doctest::Approx(std::cos(0.8)));
  CHECK(EquatorDirection(0.3).opposite().angle() == doctest::Approx(0.3 + kPi));
}

TEST_CASE("database bits") {
  CHECK_THROWS_AS(DatabaseBits(2, 0), ContractViolation);
  CHECK_THROWS_AS(DatabaseBits::from_index(4), ContractViolation);
  for (int i = 0; i < 4; ++i) CHECK(DatabaseBits::from_index(i).index() == i);
  CHECK(DatabaseBits(0, 1).complement() == DatabaseBits(1, 0));
}

TEST_CASE("heaviside convention") {
  CHECK(heaviside(0.3) == 1);
  CHECK(heaviside(0.0) == 0);
  CHECK(heaviside(-1e-18) == 0);
}

TEST_CASE("phase states") {
  const QubitState s = orthogonal_state(EquatorDirection(0.0));
  CHECK(s[0].real() == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK(s[1].real() == doctest::Approx(-1 / std::numbers::sqrt2));
  RandomStream rng(21);
  for (int n = 0; n < 100; ++n) {
    const EquatorDirection phi(6.3 * rng.uniform());
    CHECK(std::abs(phase_state(phi).inner(orthogonal_state(phi))) < 1e-15);
    // Bloch angle of the orthogonal state is phi + pi.
    const QubitDensity rho(orthogonal_state(phi));
    CHECK(expectation(rho, phi.opposite()) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("database_bits examples") {
  const QuadrantPartition axes(EquatorDirection(0.0), EquatorDirection(kPi / 2));
  CHECK(database_bits(EquatorDirection(kPi / 4), axes) == DatabaseBits(0, 0));
  CHECK(database_bits(EquatorDirection(kPi), axes) == DatabaseBits(1, 1));
  CHECK(database_bits(EquatorDirection(3 * kPi / 2 + 0.1), axes) == DatabaseBits(0, 1));
  CHECK(database_bits(EquatorDirection(kPi / 2), axes) == DatabaseBits(1, 0));
}

TEST_CASE("degenerate axes are rejected") {
  CHECK_THROWS_AS(QuadrantPartition(EquatorDirection(0.2), EquatorDirection(0.2)),
                  ContractViolation);
  CHECK_THROWS_AS(QuadrantPartition(EquatorDirection(0.2), EquatorDirection(0.2 + kPi)),
                  ContractViolation);
}

TEST_CASE("quadrants partition the equator") {
  const std::vector<std::pair<double, double>> pairs = {
      {0.0, kPi / 2}, {0.0, kPi / 3}, {kPi / 6, kPi}, {0.3, 5.0}};
  for (auto [a, b] : pairs) {
    const QuadrantPartition part{EquatorDirection(a), EquatorDirection(b)};
    double total = 0.0;
    for (DatabaseBits bits : all_database_bits()) {
      const Arc arc = part.arc(bits);
      CHECK(arc.length > 0.0);
      total += arc.length;
      CHECK(database_bits(EquatorDirection(arc.at(0.5)), part) == bits);
    }
    CHECK(total == doctest::Approx(2 * kPi).epsilon(1e-14));

    // Brute force over a 0.5 degree grid: each angle gets the label given by
    // the signs of the two dot products, and that label's arc contains it.
    for (int k = 0; k < 720; ++k) {
      const double phi = k * kPi / 360;
      const int xa = std::cos(phi - a) > 1e-12 ? 0 : 1;
      const int xb = std::cos(phi - b) > 1e-12 ? 0 : 1;
      const DatabaseBits bits = database_bits(EquatorDirection(phi), part);
      CHECK(bits == DatabaseBits(xa, xb));
      const Arc arc = part.arc(bits);
      const double pos = normalize_angle(phi - arc.start);
      CHECK((pos <= arc.length + 1e-12 || pos >= 2 * kPi - 1e-12));
    }
  }
}

TEST_CASE("antipodal directions carry complementary bits") {
  const QuadrantPartition part(EquatorDirection(0.3), EquatorDirection(5.0));
  RandomStream rng(22);
  for (int n = 0; n < 500; ++n) {
    const EquatorDirection phi(6.3 * rng.uniform());
    CHECK(database_bits(phi.opposite(), part) == database_bits(phi, part).complement());
  }
}

TEST_CASE("quadrant sampling round-trips and stays inside the arc") {
  const QuadrantPartition part(EquatorDirection(0.0), EquatorDirection(kPi / 2));
  RandomStream rng(23);
  for (DatabaseBits bits : all_database_bits()) {
    for (int n = 0; n < 10000; ++n) {
      const EquatorDirection phi = sample_in_quadrant(bits, part, rng);
      REQUIRE(database_bits(phi, part) == bits);
    }
  }
  // Quadrant 00 of orthogonal axes is the open arc (0, pi/2).
  for (int n = 0; n < 1000; ++n) {
    const double phi = sample_in_quadrant(DatabaseBits(0, 0), part, rng).angle();
    CHECK((phi > 0.0 && phi < kPi / 2));
  }
}

TEST_CASE("quadrant sampling is uniform on the arc") {
  const QuadrantPartition part(EquatorDirection(0.3), EquatorDirection(5.0));
  const DatabaseBits bits(1, 0);
  const Arc arc = part.arc(bits);
  RandomStream rng(24);
  const int n = 100000;
  std::vector<double> t(n);
  for (double& v : t) v = arc.position(sample_in_quadrant(bits, part, rng).angle());
  std::sort(t.begin(), t.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max({d, std::abs(t[i] - double(i) / n), std::abs(t[i] - double(i + 1) / n)});
  }
  // sqrt(n) D is Kolmogorov distributed; P(K > 1.95) ~ 1e-3.
  CHECK(std::sqrt(double(n)) * d < 1.95);
}

TEST_CASE("quadrant representatives") {
  const QuadrantPartition orth(EquatorDirection(0.0), EquatorDirection(kPi / 2));
  const EquatorDirection anchor(0.4);
  for (DatabaseBits bits : all_database_bits()) {
    const EquatorDirection r = quadrant_representative(anchor, bits, orth);
    CHECK(database_bits(r, orth) == bits);
    // Orthogonal axes: a reflection, so both dot magnitudes are preserved.
    CHECK(std::abs(r.dot(orth.axis_a())) == doctest::Approx(std::abs(anchor.dot(orth.axis_a()))));
    CHECK(std::abs(r.dot(orth.axis_b())) == doctest::Approx(std::abs(anchor.dot(orth.axis_b()))));
  }
  CHECK(quadrant_representative(anchor, DatabaseBits(1, 1), orth) == anchor.opposite());
  CHECK(quadrant_representative(anchor, DatabaseBits(0, 0), orth) == anchor);

  const QuadrantPartition skew(EquatorDirection(0.3), EquatorDirection(5.0));
  RandomStream rng(25);
  for (int n = 0; n < 200; ++n) {
    const EquatorDirection a(6.3 * rng.uniform());
    for (DatabaseBits bits : all_database_bits()) {
      CHECK(database_bits(quadrant_representative(a, bits, skew), skew) == bits);
    }
  }
}
