#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "crac/geometry.hpp"
#include "crac/qcore.hpp"
#include "crac/random_stream.hpp"
#include "oracles.hpp"

using namespace crac;

namespace {

QubitState random_qubit(RandomStream& rng) {
  Ket<1> v;
  v << Complex(rng.uniform() - 0.5, rng.uniform() - 0.5),
      Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return QubitState::normalized(v);
}

PairState random_pair(RandomStream& rng) {
  Ket<2> v;
  for (int i = 0; i < 4; ++i) v(i) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return PairState::normalized(v);
}

oracle::V2 to_oracle(const QubitState& q) { return {q[0], q[1]}; }

}  // namespace

TEST_CASE("tensor matches a naive Kronecker product") {
  RandomStream rng(11);
  for (int n = 0; n < 50; ++n) {
    const QubitState a = random_qubit(rng), b = random_qubit(rng);
    const PairState ab = tensor(a, b);
    const oracle::V4 ref = oracle::kron(to_oracle(a), to_oracle(b));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ab[i] - ref[i]) < 1e-15);
  }
  // |1> (x) |0> is basis index 2: the object index varies slowest.
  CHECK(std::abs(tensor(QubitState::basis(1), QubitState::basis(0))[2] - 1.0) < 1e-15);
}

TEST_CASE("span tensor checks operand sizes") {
  const std::vector<Complex> two = {1.0, 0.0};
  const std::vector<Complex> three = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(tensor(std::span<const Complex>(two), std::span<const Complex>(three)),
                  ContractViolation);
  CHECK(std::abs(tensor(std::span<const Complex>(two), std::span<const Complex>(two))[0] - 1.0) <
        1e-15);
}

TEST_CASE("partial trace agrees with index-loop oracle") {
  RandomStream rng(12);
  for (int n = 0; n < 50; ++n) {
    const PairState s = random_pair(rng);
    const PairDensity rho(s);
    oracle::V4 v{};
    for (int i = 0; i < 4; ++i) v[i] = s[i];
    const oracle::M4 ref = oracle::outer(v);
    for (bool keep_first : {true, false}) {
      const QubitDensity red = partial_trace(rho, keep_first ? Subsystem::First : Subsystem::Second);
      const oracle::M2 r = oracle::partial_trace(ref, keep_first);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(red(i, j) - r[i][j]) < 1e-14);
    }
  }
}

TEST_CASE("partial trace of a product returns the factors") {
  RandomStream rng(13);
  const QubitState a = random_qubit(rng), b = random_qubit(rng);
  const PairDensity rho(tensor(a, b));
  const QubitDensity ra = partial_trace(rho, Subsystem::First);
  const QubitDensity rb = partial_trace(rho, Subsystem::Second);
  CHECK((ra.entries() - QubitDensity(a).entries()).norm() < 1e-14);
  CHECK((rb.entries() - QubitDensity(b).entries()).norm() < 1e-14);
}

TEST_CASE("pure state validation") {
  Ket<1> v;
  v << 1.0, 1.0;
  CHECK_THROWS_AS(QubitState{v}, ContractViolation);
  v << std::nan(""), 0.0;
  CHECK_THROWS_AS(QubitState{v}, ContractViolation);
  const std::vector<Complex> three = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(QubitState::from_amplitudes(three), ContractViolation);
  CHECK_THROWS_AS(QubitState::basis(2), ContractViolation);
  Ket<1> zero = Ket<1>::Zero();
  CHECK_THROWS_AS(QubitState::normalized(zero), ContractViolation);
}

TEST_CASE("density matrix validation") {
  Mat2 m;
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(QubitDensity{m}, ContractViolation);  // not Hermitian
  m << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(QubitDensity{m}, ContractViolation);  // trace 1.2
  m << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(QubitDensity{m}, ContractViolation);  // negative eigenvalue
  m << 1.0 + 1e-11, 0.0, 0.0, -1e-11;
  CHECK_NOTHROW(QubitDensity{m});
  CHECK(QubitDensity(QubitState::basis(0)).purity() == doctest::Approx(1.0));
  m << 0.5, 0.0, 0.0, 0.5;
  CHECK(QubitDensity(m).purity() == doctest::Approx(0.5));
}

TEST_CASE("unitary validation") {
  Mat4 m = Mat4::Identity();
  m(0, 0) = 1.001;
  CHECK_THROWS_AS(UnitaryOp{m}, ContractViolation);
  CHECK_NOTHROW(UnitaryOp{Mat4::Identity()});
  CHECK(to_string(UnitaryOp::Label::PCC) == "pcc");
}

TEST_CASE("projectors are idempotent and complete") {
  RandomStream rng(14);
  for (int n = 0; n < 20; ++n) {
    const EquatorDirection axis(6.3 * rng.uniform());
    const Projector p(axis, 1), q(axis, -1);
    CHECK((p.entries() * p.entries() - p.entries()).norm() < 1e-15);
    CHECK((p.entries() + q.entries() - Mat2::Identity()).norm() < 1e-15);
    const Mat2 s = spin_observable(axis);
    CHECK((s * s - Mat2::Identity()).norm() < 1e-15);
  }
  CHECK_THROWS_AS(Projector(EquatorDirection(0.0), 0), ContractViolation);
}

TEST_CASE("Born rule for equatorial states") {
  RandomStream rng(15);
  for (int n = 0; n < 100; ++n) {
    const double phi = 6.3 * rng.uniform(), theta = 6.3 * rng.uniform();
    const QubitDensity rho(phase_state(EquatorDirection(phi)));
    CHECK(born_probability(rho, Projector(EquatorDirection(theta), 1)) ==
          doctest::Approx((1.0 + std::cos(phi - theta)) / 2.0).epsilon(1e-13));
    CHECK(expectation(rho, EquatorDirection(theta)) ==
          doctest::Approx(std::cos(phi - theta)).epsilon(1e-13));
  }
}

TEST_CASE("Bloch vector of phase states lies on the equator") {
  const auto v = bloch_vector(QubitDensity(phase_state(EquatorDirection(1.0))));
  CHECK(v.x() == doctest::Approx(std::cos(1.0)));
  CHECK(v.y() == doctest::Approx(std::sin(1.0)));
  CHECK(std::abs(v.z()) < 1e-15);
}

TEST_CASE("state and density evolution agree") {
  RandomStream rng(16);
  Mat4 h = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) {
      const Complex z(rng.uniform() - 0.5, i == j ? 0.0 : rng.uniform() - 0.5);
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  Mat4 u = es.eigenvectors() *
           es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); }).asDiagonal() *
           es.eigenvectors().adjoint();
  const UnitaryOp op(u);
  const PairState s = random_pair(rng);
  const PairDensity a = apply(op, PairDensity(s));
  const PairDensity b(apply(op, s));
  CHECK((a.entries() - b.entries()).norm() < 1e-13);
}

TEST_CASE("subsystem measurement") {
  RandomStream rng(17);
  const PairState s = random_pair(rng);
  const EquatorDirection axis(0.7);
  for (Subsystem which : {Subsystem::First, Subsystem::Second}) {
    const auto plus = measure_subsystem(s, which, Projector(axis, 1));
    const auto minus = measure_subsystem(s, which, Projector(axis, -1));
    CHECK(plus.probability + minus.probability == doctest::Approx(1.0).epsilon(1e-13));
    // After the reading, the measured qubit is in the eigenstate.
    const QubitDensity measured =
        partial_trace(PairDensity(plus.post_state), which);
    CHECK(expectation(measured, axis) == doctest::Approx(1.0).epsilon(1e-12));
    const Subsystem other = which == Subsystem::First ? Subsystem::Second : Subsystem::First;
    const QubitState rest = remaining_qubit(plus.post_state, other);
    const QubitDensity reduced = partial_trace(PairDensity(plus.post_state), other);
    CHECK((QubitDensity(rest).entries() - reduced.entries()).norm() < 1e-12);
  }
}

TEST_CASE("remaining_qubit rejects entangled pairs") {
  Ket<2> bell;
  bell << 0.0, 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2, 0.0;
  CHECK_THROWS_AS(remaining_qubit(PairState(bell), Subsystem::First), ContractViolation);
}

TEST_CASE("probability clamping") {
  CHECK(clamp_probability(1.0 + 1e-13) == 1.0);
  CHECK(clamp_probability(-1e-13) == 0.0);
  CHECK(clamp_probability(0.25) == 0.25);
  CHECK_THROWS_AS(clamp_probability(1.0 + 1e-9), ContractViolation);
  CHECK_THROWS_AS(clamp_probability(-1e-9), ContractViolation);
}
