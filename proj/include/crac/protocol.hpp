#pragma once

// The coarse-grained random access code: Alice encodes two bits in the
// quadrant of an equatorial direction, collapses the shared singlet onto
// {|phi>, |phi_perp>} and announces one bit; Bob clones, reads probe A, swaps
// the object into probe B, reads it, and corrects both readings by beta.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "crac/channel_stats.hpp"
#include "crac/geometry.hpp"
#include "crac/machines.hpp"
#include "crac/qcore.hpp"
#include "crac/random_stream.hpp"

namespace crac {

/// Quadrature or other numerical procedure failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Alice uses one representative direction per quadrant, derived from `anchor`
/// (see quadrant_representative).
struct FixedPhi {
  EquatorDirection anchor;
};

/// Alice draws phi uniformly from the arc of the quadrant of her bits.
struct UniformQuadrant {};

using PhiMode = std::variant<FixedPhi, UniformQuadrant>;

/// Probability of each database value, indexed by DatabaseBits::index().
using BitsPrior = std::array<double, 4>;

inline constexpr BitsPrior kUniformPrior = {0.25, 0.25, 0.25, 0.25};

struct ProtocolConfig {
  QuadrantPartition axes;
  ClonerAngle cloner_eta;
  PhiMode phi_mode = UniformQuadrant{};
  BitsPrior bits_prior = kUniformPrior;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  /// Prior nonnegative and summing to 1 within 1e-12.
  void validate() const;

  bool fixed_phi() const { return std::holds_alternative<FixedPhi>(phi_mode); }
  /// Direction Alice uses for `bits` in fixed mode.
  EquatorDirection representative(DatabaseBits bits) const;
};

/// Bob's two interactions. The default is the cloner followed by a swap into
/// a fresh probe B; the switches exist to check equivalent formulations.
struct Apparatus {
  UnitaryOp cloner;
  UnitaryOp transfer = swap_op();
  /// When false the probe-A reading is taken from the reduced state without
  /// collapsing the object.
  bool measure_probe_a = true;
  /// When false B is measured on the object itself instead of probe B.
  bool use_probe_b = true;

  static Apparatus standard(ClonerAngle eta) { return Apparatus{pcc_op(eta)}; }
};

struct TrialRecord {
  std::uint64_t trial = 0;
  DatabaseBits bits;
  EquatorDirection phi;
  int beta = 0;
  int outcome_a = 1;
  int outcome_b = 1;
  int guess_a = 0;
  int guess_b = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct Encoding {
  int beta;
  QubitState bob_state;
};

/// Bob's half of the singlet after Alice finds |phi> (beta = 1, Bob holds
/// |phi_perp>) or |phi_perp> (beta = 0, Bob holds |phi>).
QubitState bob_state_for(EquatorDirection phi, int beta);

/// Alice's basis measurement on the singlet; beta is uniform.
Encoding encode(EquatorDirection phi, RandomStream& rng);

/// Joint probabilities of (o_a, o_b), indexed by (1 - o) / 2.
using OutcomeTable = std::array<std::array<double, 2>, 2>;

OutcomeTable decode_distribution(const QubitState& bob_state, const QuadrantPartition& axes,
                                 const Apparatus& apparatus);

struct Outcomes {
  int a;
  int b;
};

/// Sequential sharp measurements with sampling and collapse.
Outcomes decode(const QubitState& bob_state, const QuadrantPartition& axes,
                const Apparatus& apparatus, RandomStream& rng);
Outcomes decode(const QubitState& bob_state, const ProtocolConfig& cfg, RandomStream& rng);

/// g = (1 - o) / 2 + beta (mod 2)
int guess(int outcome, int beta);

/// Alice's side of one round: database draw, direction, encoding.
struct AliceRound {
  DatabaseBits bits;
  EquatorDirection phi;
  Encoding encoding;
};

AliceRound alice_round(const ProtocolConfig& cfg, RandomStream& rng);

/// Completes a record from Alice's round and Bob's outcomes. `known_beta` is
/// the bit Bob uses to correct his readings.
TrialRecord make_record(std::uint64_t trial, const AliceRound& alice, Outcomes outcomes,
                        int known_beta);

struct TrialRun {
  std::vector<TrialRecord> records;
  ChannelStats stats;
};

/// Seeded Monte Carlo. Trials are split into `shards` contiguous blocks, each
/// driven by streams derived from (seed, shard); the result depends only on
/// (cfg, shards). Shards run on separate threads when shards > 1.
/// Throws ContractViolation when cfg.trials == 0.
TrialRun run_trials(const ProtocolConfig& cfg, unsigned shards = 1);

/// Empirical frequencies of a transcript.
ChannelStats stats_from_records(std::span<const TrialRecord> records);

/// Probability that each channel decodes its bit correctly for a given phi,
/// averaged over beta.
struct SuccessProbabilities {
  double a;
  double b;
};

SuccessProbabilities success_given_phi(const QuadrantPartition& axes, const Apparatus& apparatus,
                                       EquatorDirection phi);

/// Exact joint tables. Fixed mode sums over quadrant representatives;
/// uniform mode integrates each quadrant arc by adaptive Simpson quadrature
/// (relative tolerance 1e-9), throwing NumericalError if it fails to converge.
/// With `beta_only` the tables are conditioned on that announced bit.
ChannelStats exact_statistics(const ProtocolConfig& cfg);
ChannelStats exact_statistics(const ProtocolConfig& cfg, const Apparatus& apparatus,
                              std::optional<int> beta_only = std::nullopt);

/// CSV with header trial,x_a,x_b,phi_rad,beta,o_a,o_b,g_a,g_b.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

}  // namespace crac
