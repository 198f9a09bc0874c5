#include "crac/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace crac {
namespace {

int outcome_index(int outcome) { return (1 - outcome) / 2; }

QubitDensity probe_b_state(const QubitDensity& object, const Apparatus& apparatus) {
  const PairDensity joined = tensor(object, QubitDensity(QubitState::basis(0)));
  return partial_trace(apply(apparatus.transfer, joined), Subsystem::Second);
}

/// P(o_b = +1) given the object state entering apparatus B.
double b_plus_probability(const QubitDensity& object, const QuadrantPartition& axes,
                          const Apparatus& apparatus) {
  const QubitDensity measured = apparatus.use_probe_b ? probe_b_state(object, apparatus) : object;
  return born_probability(measured, Projector(axes.axis_b(), +1));
}

/// Branch of a probe-A reading: its probability and the object state left behind.
struct ProbeABranch {
  double probability;
  std::optional<QubitDensity> object;
};

std::array<ProbeABranch, 2> probe_a_branches(const QubitState& bob_state,
                                             const QuadrantPartition& axes,
                                             const Apparatus& apparatus) {
  const PairState cloned = apply(apparatus.cloner, tensor(bob_state, QubitState::basis(0)));
  std::array<ProbeABranch, 2> out{ProbeABranch{0.0, std::nullopt},
                                  ProbeABranch{0.0, std::nullopt}};
  if (!apparatus.measure_probe_a) {
    const PairDensity rho(cloned);
    const QubitDensity probe = partial_trace(rho, Subsystem::Second);
    const QubitDensity object = partial_trace(rho, Subsystem::First);
    for (int o : {1, -1}) {
      out[outcome_index(o)] = {born_probability(probe, Projector(axes.axis_a(), o)), object};
    }
    return out;
  }
  // Contracting the probe with the eigenvector of the reading leaves the
  // object's unnormalized ket, which stays well defined for tiny branches.
  const Ket<2>& v = cloned.amplitudes();
  for (int o : {1, -1}) {
    const QubitState e = o == 1 ? phase_state(axes.axis_a()) : orthogonal_state(axes.axis_a());
    Ket<1> rest;
    for (int i = 0; i < 2; ++i) {
      rest(i) = std::conj(e[0]) * v(2 * i) + std::conj(e[1]) * v(2 * i + 1);
    }
    auto& branch = out[outcome_index(o)];
    branch.probability = clamp_probability(rest.squaredNorm());
    if (branch.probability > 0.0) branch.object = QubitDensity(QubitState::normalized(rest));
  }
  return out;
}

void accumulate(JointTable& t, int x, int g, double w) { t[x][g] += w; }

/// Adds the contribution of one direction (conditional on `bits`) with weight w.
void accumulate_phi(ChannelStats& stats, const QuadrantPartition& axes, const Apparatus& apparatus,
                    DatabaseBits bits, EquatorDirection phi, double w,
                    std::optional<int> beta_only) {
  for (int beta : {0, 1}) {
    if (beta_only && *beta_only != beta) continue;
    const double wb = beta_only ? w : 0.5 * w;
    const OutcomeTable table = decode_distribution(bob_state_for(phi, beta), axes, apparatus);
    for (int oa : {1, -1}) {
      for (int ob : {1, -1}) {
        const double p = wb * table[outcome_index(oa)][outcome_index(ob)];
        if (p == 0.0) continue;
        accumulate(stats.joint_a, bits.x_a, guess(oa, beta), p);
        accumulate(stats.joint_b, bits.x_b, guess(ob, beta), p);
        accumulate(stats.outcome_joint_a, bits.x_a ^ beta, outcome_index(oa), p);
        accumulate(stats.outcome_joint_b, bits.x_b ^ beta, outcome_index(ob), p);
      }
    }
  }
}

// Vector-valued adaptive Simpson over one arc. The sixteen components are the
// cells of the four joint tables.
using Cells = std::array<double, 16>;

Cells flatten(const ChannelStats& s) {
  Cells c{};
  const JointTable* tables[4] = {&s.joint_a, &s.joint_b, &s.outcome_joint_a, &s.outcome_joint_b};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) c[static_cast<std::size_t>(4 * k + 2 * i + j)] = (*tables[k])[i][j];
  return c;
}

void add_cells(ChannelStats& s, const Cells& c, double w) {
  JointTable* tables[4] = {&s.joint_a, &s.joint_b, &s.outcome_joint_a, &s.outcome_joint_b};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) (*tables[k])[i][j] += w * c[static_cast<std::size_t>(4 * k + 2 * i + j)];
}

struct Simpson {
  static constexpr double kRelTol = 1e-9;
  static constexpr int kMaxDepth = 40;

  template <typename F>
  static Cells integrate(F&& f, double lo, double hi) {
    const Cells flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    const Cells whole = rule(lo, hi, flo, fmid, fhi);
    double scale = 0.0;
    for (double v : whole) scale = std::max(scale, std::abs(v));
    const double tol = kRelTol * std::max(scale, 1e-300);
    return recurse(f, lo, hi, flo, fmid, fhi, whole, tol, 0);
  }

  static Cells rule(double lo, double hi, const Cells& a, const Cells& m, const Cells& b) {
    Cells out{};
    const double h = (hi - lo) / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = h * (a[i] + 4.0 * m[i] + b[i]);
    return out;
  }

  template <typename F>
  static Cells recurse(F& f, double lo, double hi, const Cells& flo, const Cells& fmid,
                       const Cells& fhi, const Cells& whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const Cells fl = f(0.5 * (lo + mid));
    const Cells fr = f(0.5 * (mid + hi));
    const Cells left = rule(lo, mid, flo, fl, fmid);
    const Cells right = rule(mid, hi, fmid, fr, fhi);
    double err = 0.0;
    Cells sum{};
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] = left[i] + right[i];
      err = std::max(err, std::abs(sum[i] - whole[i]));
    }
    if (err <= 15.0 * tol) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (sum[i] - whole[i]) / 15.0;
      return sum;
    }
    if (depth >= kMaxDepth) {
      throw NumericalError("adaptive Simpson quadrature did not converge");
    }
    const Cells l = recurse(f, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth + 1);
    const Cells r = recurse(f, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth + 1);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = l[i] + r[i];
    return sum;
  }
};

DatabaseBits sample_bits(const BitsPrior& prior, RandomStream& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  int last_nonzero = 0;
  for (int i = 0; i < 4; ++i) {
    const double p = prior[static_cast<std::size_t>(i)];
    if (p <= 0.0) continue;
    last_nonzero = i;
    cum += p;
    if (u < cum) return DatabaseBits::from_index(i);
  }
  return DatabaseBits::from_index(last_nonzero);
}

std::vector<TrialRecord> run_shard(const ProtocolConfig& cfg, const Apparatus& apparatus,
                                   std::uint64_t shard, std::uint64_t first, std::uint64_t count) {
  RandomStream alice = derive_stream(cfg.seed, shard, StreamRole::Alice);
  RandomStream bob = derive_stream(cfg.seed, shard, StreamRole::Bob);
  std::vector<TrialRecord> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const AliceRound round = alice_round(cfg, alice);
    const Outcomes o = decode(round.encoding.bob_state, cfg.axes, apparatus, bob);
    out.push_back(make_record(first + k, round, o, round.encoding.beta));
  }
  return out;
}

}  // namespace

void ProtocolConfig::validate() const {
  double sum = 0.0;
  for (double p : bits_prior) {
    if (!std::isfinite(p) || p < 0.0) throw ContractViolation("bits prior must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStructuralTol) {
    throw ContractViolation("bits prior must sum to 1");
  }
}

EquatorDirection ProtocolConfig::representative(DatabaseBits bits) const {
  const auto* fixed = std::get_if<FixedPhi>(&phi_mode);
  if (fixed == nullptr) throw ContractViolation("representative() requires fixed phi mode");
  return quadrant_representative(fixed->anchor, bits, axes);
}

QubitState bob_state_for(EquatorDirection phi, int beta) {
  if (beta != 0 && beta != 1) throw ContractViolation("beta must be 0 or 1");
  return beta == 1 ? orthogonal_state(phi) : phase_state(phi);
}

Encoding encode(EquatorDirection phi, RandomStream& rng) {
  // Both outcomes of Alice's basis measurement on the singlet have weight 1/2.
  const int beta = rng.bernoulli(0.5) ? 1 : 0;
  return {beta, bob_state_for(phi, beta)};
}

OutcomeTable decode_distribution(const QubitState& bob_state, const QuadrantPartition& axes,
                                 const Apparatus& apparatus) {
  OutcomeTable table{};
  const auto branches = probe_a_branches(bob_state, axes, apparatus);
  for (int oa : {1, -1}) {
    const ProbeABranch& br = branches[outcome_index(oa)];
    if (br.probability == 0.0) continue;
    const double pb = b_plus_probability(*br.object, axes, apparatus);
    table[outcome_index(oa)][0] = br.probability * pb;
    table[outcome_index(oa)][1] = br.probability * (1.0 - pb);
  }
  return table;
}

Outcomes decode(const QubitState& bob_state, const QuadrantPartition& axes,
                const Apparatus& apparatus, RandomStream& rng) {
  const auto branches = probe_a_branches(bob_state, axes, apparatus);
  const int oa = rng.uniform() < branches[0].probability ? 1 : -1;
  const ProbeABranch& br = branches[outcome_index(oa)];
  const double pb = b_plus_probability(*br.object, axes, apparatus);
  const int ob = rng.uniform() < pb ? 1 : -1;
  return {oa, ob};
}

Outcomes decode(const QubitState& bob_state, const ProtocolConfig& cfg, RandomStream& rng) {
  return decode(bob_state, cfg.axes, Apparatus::standard(cfg.cloner_eta), rng);
}

int guess(int outcome, int beta) {
  if (outcome != 1 && outcome != -1) throw ContractViolation("outcome must be +1 or -1");
  if (beta != 0 && beta != 1) throw ContractViolation("beta must be 0 or 1");
  return ((1 - outcome) / 2 + beta) % 2;
}

AliceRound alice_round(const ProtocolConfig& cfg, RandomStream& rng) {
  const DatabaseBits bits = sample_bits(cfg.bits_prior, rng);
  const EquatorDirection phi = cfg.fixed_phi() ? cfg.representative(bits)
                                               : sample_in_quadrant(bits, cfg.axes, rng);
  return {bits, phi, encode(phi, rng)};
}

TrialRecord make_record(std::uint64_t trial, const AliceRound& alice, Outcomes outcomes,
                        int known_beta) {
  TrialRecord r;
  r.trial = trial;
  r.bits = alice.bits;
  r.phi = alice.phi;
  r.beta = alice.encoding.beta;
  r.outcome_a = outcomes.a;
  r.outcome_b = outcomes.b;
  r.guess_a = guess(outcomes.a, known_beta);
  r.guess_b = guess(outcomes.b, known_beta);
  return r;
}

ChannelStats stats_from_records(std::span<const TrialRecord> records) {
  if (records.empty()) throw ContractViolation("no trials: statistics are empty");
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 4> counts{};
  for (const TrialRecord& r : records) {
    ++counts[0][r.bits.x_a][r.guess_a];
    ++counts[1][r.bits.x_b][r.guess_b];
    ++counts[2][r.bits.x_a ^ r.beta][outcome_index(r.outcome_a)];
    ++counts[3][r.bits.x_b ^ r.beta][outcome_index(r.outcome_b)];
  }
  ChannelStats s;
  const double n = static_cast<double>(records.size());
  JointTable* tables[] = {&s.joint_a, &s.joint_b, &s.outcome_joint_a, &s.outcome_joint_b};
  for (std::size_t t = 0; t < 4; ++t) {
    for (int x = 0; x < 2; ++x) {
      for (int g = 0; g < 2; ++g) (*tables[t])[x][g] = static_cast<double>(counts[t][x][g]) / n;
    }
  }
  s.trials = records.size();
  s.classical_bits_used = records.size();
  return s;
}

TrialRun run_trials(const ProtocolConfig& cfg, unsigned shards) {
  cfg.validate();
  if (cfg.trials == 0) throw ContractViolation("trials must be positive");
  if (shards == 0) shards = 1;
  const Apparatus apparatus = Apparatus::standard(cfg.cloner_eta);

  const std::uint64_t n = cfg.trials;
  std::vector<std::vector<TrialRecord>> parts(shards);
  auto bounds = [&](unsigned s) {
    const std::uint64_t lo = n * s / shards;
    const std::uint64_t hi = n * (s + 1) / shards;
    return std::pair{lo, hi - lo};
  };
  if (shards == 1) {
    parts[0] = run_shard(cfg, apparatus, 0, 0, n);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(shards);
    for (unsigned s = 0; s < shards; ++s) {
      workers.emplace_back([&, s] {
        const auto [first, count] = bounds(s);
        parts[s] = run_shard(cfg, apparatus, s, first, count);
      });
    }
    for (auto& t : workers) t.join();
  }

  TrialRun run;
  run.records.reserve(n);
  for (auto& p : parts) run.records.insert(run.records.end(), p.begin(), p.end());
  run.stats = stats_from_records(run.records);
  return run;
}

SuccessProbabilities success_given_phi(const QuadrantPartition& axes, const Apparatus& apparatus,
                                       EquatorDirection phi) {
  ChannelStats s;
  accumulate_phi(s, axes, apparatus, database_bits(phi, axes), phi, 1.0, std::nullopt);
  return {success_probability(s.joint_a), success_probability(s.joint_b)};
}

ChannelStats exact_statistics(const ProtocolConfig& cfg) {
  return exact_statistics(cfg, Apparatus::standard(cfg.cloner_eta));
}

ChannelStats exact_statistics(const ProtocolConfig& cfg, const Apparatus& apparatus,
                              std::optional<int> beta_only) {
  cfg.validate();
  ChannelStats stats;
  stats.exact = true;
  for (DatabaseBits bits : all_database_bits()) {
    const double prior = cfg.bits_prior[static_cast<std::size_t>(bits.index())];
    if (prior <= 0.0) continue;
    if (cfg.fixed_phi()) {
      accumulate_phi(stats, cfg.axes, apparatus, bits, cfg.representative(bits), prior, beta_only);
      continue;
    }
    const Arc arc = cfg.axes.arc(bits);
    auto integrand = [&](double t) {
      ChannelStats local;
      accumulate_phi(local, cfg.axes, apparatus, bits, EquatorDirection(arc.at(t)), 1.0,
                     beta_only);
      return flatten(local);
    };
    // Integrating over t in [0, 1] yields the uniform average over the arc.
    add_cells(stats, Simpson::integrate(integrand, 0.0, 1.0), prior);
  }
  return stats;
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial,x_a,x_b,phi_rad,beta,o_a,o_b,g_a,g_b\n";
  char phi[64];
  for (const TrialRecord& r : records) {
    std::snprintf(phi, sizeof phi, "%.9f", r.phi.angle());
    out << r.trial << ',' << int{r.bits.x_a} << ',' << int{r.bits.x_b} << ',' << phi << ','
        << r.beta << ',' << r.outcome_a << ',' << r.outcome_b << ',' << r.guess_a << ','
        << r.guess_b << '\n';
  }
}

}  // namespace crac
