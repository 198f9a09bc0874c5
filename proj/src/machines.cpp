#include "crac/machines.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace crac {

ClonerAngle::ClonerAngle(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= std::numbers::pi / 2.0)) {
    throw ContractViolation("cloner angle must lie in [0, pi/2], got " + std::to_string(eta));
  }
}

UnitaryOp identity_op() { return UnitaryOp(Mat4::Identity(), UnitaryOp::Label::Identity); }

UnitaryOp swap_op() {
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(2 * j + i, 2 * i + j) = 1.0;
  return UnitaryOp(m, UnitaryOp::Label::Swap);
}

UnitaryOp pcc_op(ClonerAngle angle, double completion_phase) {
  const double c = std::cos(angle.value());
  const double s = std::sin(angle.value());
  const Complex phase = std::polar(1.0, completion_phase);
  // Columns are images of |00>, |01>, |10>, |11>.
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = phase * c;
  m(2, 1) = -phase * s;
  m(2, 2) = c;
  m(1, 2) = s;
  m(3, 3) = phase;
  return UnitaryOp(m, UnitaryOp::Label::PCC, angle.value());
}

}  // namespace crac
