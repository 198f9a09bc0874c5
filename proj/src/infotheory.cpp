#include "crac/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crac/qcore.hpp"

namespace crac {

JointDistribution::JointDistribution(const JointTable& table) : table_(table) {
  double sum = 0.0;
  for (const auto& row : table_) {
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ContractViolation("joint distribution cells must be finite and nonnegative");
      }
      sum += v;
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ContractViolation("joint distribution sums to " + std::to_string(sum));
  }
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double binary_entropy(double p) {
  p = clamp_probability(p);
  const double q[2] = {p, 1.0 - p};
  return shannon_entropy(q);
}

double mutual_information(const JointDistribution& joint) {
  const auto& t = joint.table();
  const double px[2] = {joint.marginal_x(0), joint.marginal_x(1)};
  const double pg[2] = {joint.marginal_g(0), joint.marginal_g(1)};
  const double pxg[4] = {t[0][0], t[0][1], t[1][0], t[1][1]};
  const double mi = shannon_entropy(px) + shannon_entropy(pg) - shannon_entropy(pxg);
  return std::max(mi, 0.0);
}

double bsc_information(double xi) { return 1.0 - binary_entropy((1.0 + xi) / 2.0); }

double evans_schulman_bound(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw ContractViolation("bias must lie in [0, 1]");
  return xi * xi;
}

BiasParameters::BiasParameters(double a, double b) : xi_a(a), xi_b(b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw ContractViolation("bias parameters must lie in [0, 1]");
  }
}

InformationGain information_gain(const ChannelStats& stats, std::optional<BiasParameters> bias,
                                 double tolerance) {
  InformationGain g;
  g.i_a = mutual_information(JointDistribution(stats.joint_a));
  g.i_b = mutual_information(JointDistribution(stats.joint_b));
  g.total = g.i_a + g.i_b;
  g.i_a_outcome = mutual_information(JointDistribution(stats.outcome_joint_a));
  g.i_b_outcome = mutual_information(JointDistribution(stats.outcome_joint_b));

  g.exceeds_one = g.total > 1.0 + tolerance;
  if (bias) {
    g.exceeds_bias_bound = g.i_a > evans_schulman_bound(bias->xi_a) + tolerance ||
                           g.i_b > evans_schulman_bound(bias->xi_b) + tolerance ||
                           g.total > bias->xi_sq_sum() + tolerance;
  }
  g.routes_diverge = std::abs(g.i_a - g.i_a_outcome) > tolerance ||
                     std::abs(g.i_b - g.i_b_outcome) > tolerance;
  return g;
}

}  // namespace crac
