#include "crac/ozawa.hpp"

#include <algorithm>
#include <cmath>

namespace crac {
namespace {

bool hermitian(const Mat4& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= kStructuralTol;
}

double expect(const Mat4& op, const PairState& s) {
  return s.amplitudes().dot(op * s.amplitudes()).real();
}

}  // namespace

HeisenbergPair::HeisenbergPair(const Mat4& in, const Mat4& out) : in_op(in), out_op(out) {
  if (!hermitian(in_op) || !hermitian(out_op)) {
    throw ContractViolation("Heisenberg observables must be Hermitian");
  }
}

double HeisenbergPair::rms_difference(const PairState& initial) const {
  const Mat4 diff = out_op - in_op;
  // <(D)^2> = ||D psi||^2, which is nonnegative by construction.
  const double sq = (diff * initial.amplitudes()).squaredNorm();
  return std::sqrt(std::max(sq, 0.0));
}

HeisenbergPair meter_pair(const UnitaryOp& u, EquatorDirection axis_a) {
  const Mat2 a = spin_observable(axis_a);
  const Mat4& U = u.entries();
  Mat4 out = U.adjoint() * tensor(Mat2(Mat2::Identity()), a) * U;
  out = 0.5 * (out + out.adjoint()).eval();
  return {tensor(a, Mat2(Mat2::Identity())), out};
}

HeisenbergPair object_pair(const UnitaryOp& u, EquatorDirection axis_b) {
  const Mat4 in = tensor(spin_observable(axis_b), Mat2(Mat2::Identity()));
  const Mat4& U = u.entries();
  Mat4 out = U.adjoint() * in * U;
  out = 0.5 * (out + out.adjoint()).eval();
  return {in, out};
}

double noise_epsilon(const UnitaryOp& u, const QubitState& psi, EquatorDirection axis_a,
                     const QubitState& probe) {
  return meter_pair(u, axis_a).rms_difference(tensor(psi, probe));
}

double disturbance_eta(const UnitaryOp& u, const QubitState& psi, EquatorDirection axis_b,
                       const QubitState& probe) {
  return object_pair(u, axis_b).rms_difference(tensor(psi, probe));
}

MeterExpectations meter_expectations(const UnitaryOp& u, const QubitState& psi,
                                     EquatorDirection axis_a, const QubitState& probe) {
  const HeisenbergPair pair = meter_pair(u, axis_a);
  const PairState initial = tensor(psi, probe);
  return {expect(pair.out_op, initial), expect(pair.in_op, initial)};
}

}  // namespace crac
