#include "crac/qcore.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace crac {
namespace {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

Mat2 reduce(const Mat4& m, Subsystem keep) {
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        if (keep == Subsystem::First) {
          out(i, j) += m(2 * i + k, 2 * j + k);
        } else {
          out(i, j) += m(2 * k + i, 2 * k + j);
        }
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PureState

template <int Qubits>
PureState<Qubits>::PureState(const Vector& amplitudes) : amplitudes_(amplitudes) {
  if (!all_finite(amplitudes_)) {
    throw ContractViolation("state amplitudes must be finite");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kStructuralTol) {
    throw ContractViolation("state is not normalized");
  }
}

template <int Qubits>
PureState<Qubits> PureState<Qubits>::from_amplitudes(std::span<const Complex> amplitudes) {
  if (amplitudes.size() != static_cast<std::size_t>(kDim)) {
    throw ContractViolation("expected " + std::to_string(kDim) + " amplitudes, got " +
                            std::to_string(amplitudes.size()));
  }
  Vector v;
  for (int i = 0; i < kDim; ++i) v(i) = amplitudes[static_cast<std::size_t>(i)];
  return PureState(v);
}

template <int Qubits>
PureState<Qubits> PureState<Qubits>::normalized(const Vector& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw ContractViolation("cannot normalize a zero or non-finite vector");
  }
  return PureState(v / n);
}

template <int Qubits>
PureState<Qubits> PureState<Qubits>::basis(int index) {
  if (index < 0 || index >= kDim) throw ContractViolation("basis index out of range");
  Vector v = Vector::Zero();
  v(index) = 1.0;
  return PureState(v);
}

template class PureState<1>;
template class PureState<2>;

// ------------------------------------------------------------ DensityMatrix

template <int Qubits>
DensityMatrix<Qubits>::DensityMatrix(const Matrix& entries) : entries_(entries) {
  if (!all_finite(entries_)) throw ContractViolation("density matrix must be finite");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol) {
    throw ContractViolation("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > kStructuralTol) {
    throw ContractViolation("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kPositivityTol) {
    throw ContractViolation("density matrix has a negative eigenvalue");
  }
}

template <int Qubits>
DensityMatrix<Qubits>::DensityMatrix(const PureState<Qubits>& psi)
    : DensityMatrix(Matrix(psi.amplitudes() * psi.amplitudes().adjoint())) {}

template class DensityMatrix<1>;
template class DensityMatrix<2>;

// ---------------------------------------------------------------- UnitaryOp

UnitaryOp::UnitaryOp(const Mat4& entries, Label label, double cloner_eta)
    : entries_(entries), label_(label), cloner_eta_(cloner_eta) {
  if (!all_finite(entries_)) throw ContractViolation("operator must be finite");
  const Mat4 defect = entries_.adjoint() * entries_ - Mat4::Identity();
  if (defect.cwiseAbs().maxCoeff() > kStructuralTol) {
    throw ContractViolation("operator is not unitary");
  }
}

std::string to_string(UnitaryOp::Label label) {
  switch (label) {
    case UnitaryOp::Label::Identity: return "identity";
    case UnitaryOp::Label::Swap: return "swap";
    case UnitaryOp::Label::PCC: return "pcc";
    case UnitaryOp::Label::Custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------- Projector

Mat2 spin_observable(EquatorDirection axis) {
  Mat2 m;
  m << 0.0, Complex(axis.x(), -axis.y()),
       Complex(axis.x(), axis.y()), 0.0;
  return m;
}

Projector::Projector(EquatorDirection axis, int sign) : axis_(axis), sign_(sign) {
  if (sign != 1 && sign != -1) throw ContractViolation("projector sign must be +1 or -1");
  entries_ = 0.5 * (Mat2::Identity() + static_cast<double>(sign) * spin_observable(axis));
}

// --------------------------------------------------------------- operations

Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

PairState tensor(const QubitState& a, const QubitState& b) {
  Ket<2> v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = a[i] * b[j];
  return PairState::normalized(v);
}

PairDensity tensor(const QubitDensity& a, const QubitDensity& b) {
  return PairDensity(tensor(a.entries(), b.entries()));
}

PairState tensor(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != 2 || b.size() != 2) {
    throw ContractViolation("tensor: both operands must be single-qubit sized");
  }
  return tensor(QubitState::from_amplitudes(a), QubitState::from_amplitudes(b));
}

PairState apply(const UnitaryOp& u, const PairState& s) {
  return PairState::normalized(u.entries() * s.amplitudes());
}

PairDensity apply(const UnitaryOp& u, const PairDensity& rho) {
  Mat4 out = u.entries() * rho.entries() * u.entries().adjoint();
  // Restore exact Hermiticity lost to rounding.
  out = 0.5 * (out + out.adjoint()).eval();
  return PairDensity(out);
}

QubitDensity partial_trace(const PairDensity& rho, Subsystem keep) {
  return QubitDensity(reduce(rho.entries(), keep));
}

double clamp_probability(double p) {
  if (!(p >= -kStructuralTol && p <= 1.0 + kStructuralTol)) {
    throw ContractViolation("probability out of range: " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

double born_probability(const QubitDensity& rho, const Projector& p) {
  return clamp_probability((rho.entries() * p.entries()).trace().real());
}

double expectation(const QubitDensity& rho, EquatorDirection axis) {
  return born_probability(rho, Projector(axis, +1)) - born_probability(rho, Projector(axis, -1));
}

Eigen::Vector3d bloch_vector(const QubitDensity& rho) {
  const Complex off = rho(1, 0);
  return {2.0 * off.real(), 2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

SubsystemMeasurement measure_subsystem(const PairState& s, Subsystem which, const Projector& p) {
  const Mat4 lifted = which == Subsystem::First ? tensor(p.entries(), Mat2::Identity())
                                                : tensor(Mat2::Identity(), p.entries());
  const Ket<2> projected = lifted * s.amplitudes();
  const double prob = clamp_probability(projected.squaredNorm());
  if (prob == 0.0) return {0.0, s};
  return {prob, PairState::normalized(projected)};
}

QubitState remaining_qubit(const PairState& product, Subsystem keep) {
  // Pick the slice of the other factor with the largest weight.
  const Ket<2>& v = product.amplitudes();
  Ket<1> best = Ket<1>::Zero();
  for (int k = 0; k < 2; ++k) {
    Ket<1> slice;
    if (keep == Subsystem::First) {
      slice << v(k), v(2 + k);
    } else {
      slice << v(2 * k), v(2 * k + 1);
    }
    if (slice.squaredNorm() > best.squaredNorm()) best = slice;
  }
  QubitState kept = QubitState::normalized(best);
  const QubitDensity reduced = partial_trace(PairDensity(product), keep);
  if (std::abs(reduced.purity() - 1.0) > 1e-9) {
    throw ContractViolation("remaining_qubit: pair state is entangled");
  }
  return kept;
}

}  // namespace crac
