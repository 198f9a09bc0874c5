#pragma once

#include "crac/geometry.hpp"
#include "crac/qcore.hpp"

namespace crac {

/// Input and output Heisenberg-picture observables on (object, probe).
struct HeisenbergPair {
  Mat4 in_op;
  Mat4 out_op;

  /// Throws ContractViolation unless both operators are Hermitian within 1e-12.
  HeisenbergPair(const Mat4& in, const Mat4& out);

  /// <psi (x) probe| (out - in)^2 |psi (x) probe>^{1/2}
  double rms_difference(const PairState& initial) const;
};

/// Pair for the meter reading: in = A (x) I, out = U^dagger (I (x) A) U.
HeisenbergPair meter_pair(const UnitaryOp& u, EquatorDirection axis_a);

/// Pair for the object observable: in = B (x) I, out = U^dagger (B (x) I) U.
HeisenbergPair object_pair(const UnitaryOp& u, EquatorDirection axis_b);

/// Ozawa noise of measuring A by reading the probe after U.
double noise_epsilon(const UnitaryOp& u, const QubitState& psi, EquatorDirection axis_a,
                     const QubitState& probe = QubitState::basis(0));

/// Ozawa disturbance of B caused by U.
double disturbance_eta(const UnitaryOp& u, const QubitState& psi, EquatorDirection axis_b,
                       const QubitState& probe = QubitState::basis(0));

/// <M^out> and <A^in> on psi (x) probe.
struct MeterExpectations {
  double meter_out;
  double observable_in;
};

MeterExpectations meter_expectations(const UnitaryOp& u, const QubitState& psi,
                                     EquatorDirection axis_a,
                                     const QubitState& probe = QubitState::basis(0));

}  // namespace crac
