#pragma once

// Exact one- and two-qubit quantum mechanics on dense Eigen matrices.
//
// Composite systems are ordered (object, probe): in a two-qubit basis index
// 2*i + j, i labels the first (object) qubit and varies slowest.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "crac/equator_direction.hpp"

namespace crac {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Tolerance for structural invariants: norm, trace, Hermiticity, unitarity.
inline constexpr double kStructuralTol = 1e-12;
/// Slack allowed for negative eigenvalues of a density matrix.
inline constexpr double kPositivityTol = 1e-10;

/// Raised when a precondition or type invariant is violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Subsystem { First, Second };

template <int Qubits>
inline constexpr int kDimension = 1 << Qubits;

template <int Qubits>
using Ket = Eigen::Matrix<Complex, kDimension<Qubits>, 1>;

template <int Qubits>
using Operator = Eigen::Matrix<Complex, kDimension<Qubits>, kDimension<Qubits>>;

/// Normalized state vector of one or two qubits.
template <int Qubits>
class PureState {
  static_assert(Qubits == 1 || Qubits == 2);

 public:
  static constexpr int kQubits = Qubits;
  static constexpr int kDim = kDimension<Qubits>;
  using Vector = Ket<Qubits>;

  /// Throws ContractViolation unless finite and of unit norm within 1e-12.
  explicit PureState(const Vector& amplitudes);

  /// Checks the amplitude count as well as the invariants above.
  static PureState from_amplitudes(std::span<const Complex> amplitudes);

  /// Rescales a nonzero finite vector to unit norm.
  static PureState normalized(const Vector& v);

  static PureState basis(int index);

  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_(i); }

  /// <this|other>
  Complex inner(const PureState& other) const { return amplitudes_.dot(other.amplitudes_); }

 private:
  Vector amplitudes_;
};

using QubitState = PureState<1>;
using PairState = PureState<2>;

/// Hermitian, unit-trace, positive semidefinite matrix (validated on construction).
template <int Qubits>
class DensityMatrix {
  static_assert(Qubits == 1 || Qubits == 2);

 public:
  static constexpr int kDim = kDimension<Qubits>;
  using Matrix = Operator<Qubits>;

  explicit DensityMatrix(const Matrix& entries);
  explicit DensityMatrix(const PureState<Qubits>& psi);

  const Matrix& entries() const { return entries_; }
  Complex operator()(int r, int c) const { return entries_(r, c); }

  double purity() const { return (entries_ * entries_).trace().real(); }

 private:
  Matrix entries_;
};

using QubitDensity = DensityMatrix<1>;
using PairDensity = DensityMatrix<2>;

/// A two-qubit evolution operator.
class UnitaryOp {
 public:
  enum class Label { Identity, Swap, PCC, Custom };

  /// Throws ContractViolation if U^dagger U differs from I by more than 1e-12.
  explicit UnitaryOp(const Mat4& entries, Label label = Label::Custom, double cloner_eta = 0.0);

  const Mat4& entries() const { return entries_; }
  Label label() const { return label_; }
  /// Only meaningful for Label::PCC.
  double cloner_eta() const { return cloner_eta_; }

 private:
  Mat4 entries_;
  Label label_;
  double cloner_eta_;
};

std::string to_string(UnitaryOp::Label label);

/// Sharp projector 1/2 (I + sign * axis . sigma) for an equatorial axis.
class Projector {
 public:
  Projector(EquatorDirection axis, int sign);

  const Mat2& entries() const { return entries_; }
  EquatorDirection axis() const { return axis_; }
  int sign() const { return sign_; }

 private:
  Mat2 entries_;
  EquatorDirection axis_;
  int sign_;
};

/// Pauli operator cos(theta) sigma_x + sin(theta) sigma_y; eigenvalues +-1.
Mat2 spin_observable(EquatorDirection axis);

PairState tensor(const QubitState& a, const QubitState& b);
PairDensity tensor(const QubitDensity& a, const QubitDensity& b);
Mat4 tensor(const Mat2& a, const Mat2& b);

/// Kronecker product of two row-major single-qubit amplitude lists.
/// Throws ContractViolation if either operand is not single-qubit sized.
PairState tensor(std::span<const Complex> a, std::span<const Complex> b);

PairState apply(const UnitaryOp& u, const PairState& s);
PairDensity apply(const UnitaryOp& u, const PairDensity& rho);

QubitDensity partial_trace(const PairDensity& rho, Subsystem keep);

/// Born-rule probability tr(rho Pi). Overshoot beyond [0,1] larger than 1e-12
/// is a contract violation; smaller overshoot is clamped.
double born_probability(const QubitDensity& rho, const Projector& p);

/// <axis . sigma> = P(+) - P(-).
double expectation(const QubitDensity& rho, EquatorDirection axis);

/// Bloch vector (x, y, z) of a single-qubit state.
Eigen::Vector3d bloch_vector(const QubitDensity& rho);

/// Result of a projective measurement on one half of a pure pair state.
struct SubsystemMeasurement {
  double probability;
  /// Post-measurement state; only meaningful when probability > 0.
  PairState post_state;
};

/// Applies Pi to the chosen subsystem: probability <psi|Pi|psi> and the
/// renormalized post-measurement state.
SubsystemMeasurement measure_subsystem(const PairState& s, Subsystem which, const Projector& p);

/// Reduced state of the other half after a rank-one projection on one half.
/// The pair state must be a product state up to 1e-12 (always true after a
/// sharp measurement of one qubit).
QubitState remaining_qubit(const PairState& product, Subsystem keep);

double clamp_probability(double p);

}  // namespace crac
