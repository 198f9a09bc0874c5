#pragma once

#include <array>
#include <cstdint>

namespace crac {

/// 2x2 table over (x, g), row index x.
using JointTable = std::array<std::array<double, 2>, 2>;

/// Per-channel joint distributions of one protocol configuration.
struct ChannelStats {
  /// (x_w, g_w): Alice's bit against Bob's beta-corrected guess.
  JointTable joint_a{};
  JointTable joint_b{};
  /// (x_w xor beta, o'_w): bit of Bob's actual qubit against the raw outcome bit.
  JointTable outcome_joint_a{};
  JointTable outcome_joint_b{};
  /// Number of sampled rounds; 0 for an exact distribution.
  std::uint64_t trials = 0;
  /// beta messages sent, one per sampled round.
  std::uint64_t classical_bits_used = 0;
  bool exact = false;
};

inline double success_probability(const JointTable& t) { return t[0][0] + t[1][1]; }

}  // namespace crac
