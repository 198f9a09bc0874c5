#pragma once

#include "crac/qcore.hpp"

namespace crac {

/// Cloner angle eta in [0, pi/2]; sin(eta) and cos(eta) are the Bloch lengths
/// left on the probe and on the object respectively.
class ClonerAngle {
 public:
  explicit ClonerAngle(double eta);
  double value() const { return eta_; }

 private:
  double eta_;
};

UnitaryOp identity_op();

/// Exchanges object and probe: |i j> -> |j i>.
UnitaryOp swap_op();

/// Economical phase-covariant 1->2 cloner on (object, probe):
///   |00> -> |00>
///   |10> -> cos(eta)|10> + sin(eta)|01>
/// completed to a unitary by
///   |01> -> e^{i c}(cos(eta)|01> - sin(eta)|10>)
///   |11> -> e^{i c}|11>
/// where c is `completion_phase`. Protocol results never depend on c because
/// the probe always starts in |0>.
UnitaryOp pcc_op(ClonerAngle angle, double completion_phase = 0.0);

}  // namespace crac
