#pragma once

#include <optional>
#include <span>

#include "crac/channel_stats.hpp"

namespace crac {

/// Nonnegative 2x2 joint distribution summing to 1 within 1e-9.
class JointDistribution {
 public:
  explicit JointDistribution(const JointTable& table);

  const JointTable& table() const { return table_; }
  double marginal_x(int x) const { return table_[x][0] + table_[x][1]; }
  double marginal_g(int g) const { return table_[0][g] + table_[1][g]; }

 private:
  JointTable table_;
};

/// Shannon entropy in bits of a probability vector, with 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

/// H(p) in bits. Inputs within 1e-12 outside [0, 1] are clamped; anything
/// further out is a ContractViolation.
double binary_entropy(double p);

/// I(x : g) = H(x) + H(g) - H(x, g), in bits, clamped at 0.
double mutual_information(const JointDistribution& joint);

/// Information carried by a binary symmetric channel with bias xi and a
/// uniform input: 1 - H((1 + xi) / 2).
double bsc_information(double xi);

/// Evans-Schulman attenuation bound for a xi-biased symmetric channel fed by
/// one error-free bit: xi^2.
double evans_schulman_bound(double xi);

/// Bias parameters of the two channels, each in [0, 1].
struct BiasParameters {
  double xi_a = 0.0;
  double xi_b = 0.0;

  BiasParameters() = default;
  BiasParameters(double a, double b);

  double xi_sq_sum() const { return xi_a * xi_a + xi_b * xi_b; }
};

/// Tolerance for comparing an exact information value to its bound.
inline constexpr double kBoundTol = 1e-9;

struct InformationGain {
  double i_a = 0.0;
  double i_b = 0.0;
  double total = 0.0;
  /// Same quantities from the outcome tables (x xor beta, o').
  double i_a_outcome = 0.0;
  double i_b_outcome = 0.0;

  /// total > 1 + tolerance.
  bool exceeds_one = false;
  /// Some i_w > xi_w^2 + tolerance, or total > xi_A^2 + xi_B^2 + tolerance.
  /// Only evaluated when bias parameters were supplied.
  bool exceeds_bias_bound = false;
  /// The guess route and the outcome route disagree by more than tolerance.
  bool routes_diverge = false;

  bool violated() const { return exceeds_one || exceeds_bias_bound || routes_diverge; }
};

/// Information gain of a configuration. `tolerance` defaults to 1e-9, which
/// suits exact statistics; callers checking sampled statistics pass a
/// statistical allowance.
InformationGain information_gain(const ChannelStats& stats,
                                 std::optional<BiasParameters> bias = std::nullopt,
                                 double tolerance = kBoundTol);

}  // namespace crac
