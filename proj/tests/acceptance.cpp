// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "crac/analysis.hpp"
#include "crac/netsim.hpp"
#include "crac/ozawa.hpp"
#include "oracles.hpp"

using namespace crac;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ProtocolConfig fixed(const QuadrantPartition& axes, double eta, EquatorDirection phi,
                     std::uint64_t trials = 1, std::uint64_t seed = 0) {
  ProtocolConfig cfg{.axes = axes, .cloner_eta = ClonerAngle(eta)};
  cfg.phi_mode = FixedPhi{phi};
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

const QuadrantPartition kOrthogonal{EquatorDirection(0.0), EquatorDirection(kPi / 2)};

std::vector<QuadrantPartition> axis_pairs() {
  return {kOrthogonal,
          QuadrantPartition(EquatorDirection(0.0), EquatorDirection(kPi / 3)),
          QuadrantPartition(EquatorDirection(kPi / 6), EquatorDirection(kPi)),
          QuadrantPartition(EquatorDirection(0.3), EquatorDirection(5.0))};
}

Outcome criterion1() {
  double worst = 0.0, worst_swapped = INFINITY;
  std::string labeling;
  std::size_t points = 0;
  for (const QuadrantPartition& axes : axis_pairs()) {
    std::vector<double> etas, deltas;
    for (int k = 0; k < 20; ++k) etas.push_back(k * (kPi / 2) / 19);
    for (int k = 0; k < 20; ++k) deltas.push_back(k * 2 * kPi / 20);
    const Eq10Report r = verify_eq10(SweepGrid(etas, deltas, axes));
    worst = std::max(worst, r.max_deviation);
    worst_swapped = std::min(worst_swapped, r.max_deviation_swapped);
    points += r.points;
    if (labeling.empty()) labeling = r.matched_labeling;
    if (labeling != r.matched_labeling) labeling = "inconsistent";
  }
  return {worst < 1e-10 && points == 1600 && labeling == "sin-A/cos-B",
          fmt("%zu points, max |closed form - engine| = %.3g (tol 1e-10), matched labeling %s "
              "(other labeling deviates by >= %.3g)",
              points, worst, labeling.c_str(), worst_swapped)};
}

Outcome criterion2() {
  const OptimizeResult xi = optimize_gain(kOrthogonal, Objective::XiSqSum);
  const double mi = gain_objective(kOrthogonal, Objective::MutualInfoTotal, xi.eta, xi.delta);
  const double expected_mi = 2 * (1 - oracle::h2(0.75));
  const bool ok = std::abs(xi.value - 0.5) < 1e-9 && std::abs(xi.eta - kPi / 4) < 1e-6 &&
                  std::abs(xi.delta - kPi / 4) < 1e-6 && std::abs(mi - expected_mi) < 1e-6 &&
                  std::abs(mi - 0.377443) < 1e-6 && mi <= 0.5;
  return {ok, fmt("eta = %.9f, delta = %.9f (pi/4 +- 1e-6), xi_A^2 + xi_B^2 = %.12f (0.5 +- 1e-9), "
                  "I_total = %.7f (0.377443 +- 1e-6) <= 0.5",
                  xi.eta, xi.delta, xi.value, mi)};
}

Outcome criterion3() {
  const ProtocolConfig cfg = fixed(kOrthogonal, kPi / 2, kOrthogonal.axis_a());
  const InformationGain g = information_gain(exact_statistics(cfg), effective_bias(cfg));
  return {std::abs(g.i_a - 1.0) < 1e-9 && std::abs(g.i_b) < 1e-9,
          fmt("eta = pi/2, phi = axis_a: I_A = %.12f (1 +- 1e-9), I_B = %.3g (0 +- 1e-9)", g.i_a,
              g.i_b)};
}

Outcome criterion4() {
  const EsGridReport r = evans_schulman_grid(1e-3);
  // Independent recomputation of every margin.
  double min_margin = INFINITY, min_interior = INFINITY;
  for (int k = 0; k <= 1000; ++k) {
    const double xi = k / 1000.0;
    const double m = xi * xi - (1 - oracle::h2((1 + xi) / 2));
    min_margin = std::min(min_margin, m);
    if (k != 0 && k != 1000) min_interior = std::min(min_interior, m);
  }
  const bool ok = r.pass && r.points == 1001 && min_margin >= 0.0 && min_interior > 1e-9 &&
                  std::abs(r.margin_at_zero) < 1e-9 && std::abs(r.margin_at_one) < 1e-9 &&
                  std::abs(r.min_interior_margin - min_interior) < 1e-12;
  return {ok, fmt("%zu margins, min %.3g, min interior %.3g (> 0), |margin| at 0 and 1: %.3g, %.3g "
                  "(< 1e-9)",
                  r.points, r.min_margin, r.min_interior_margin, std::abs(r.margin_at_zero),
                  std::abs(r.margin_at_one))};
}

Outcome criterion5() {
  RandomStream rng(20240501);
  std::size_t bad = 0;
  double max_total = 0.0, max_slack = -INFINITY, max_channel_slack = -INFINITY, max_xi_sq = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double a = 2 * kPi * rng.uniform();
    const double gap = 0.05 + (kPi - 0.1) * rng.uniform();
    const QuadrantPartition axes{EquatorDirection(a), EquatorDirection(a + gap)};
    const ProtocolConfig cfg =
        fixed(axes, (kPi / 2) * rng.uniform(), EquatorDirection(2 * kPi * rng.uniform()));
    const BiasParameters xi = effective_bias(cfg);
    const InformationGain g = information_gain(exact_statistics(cfg), xi);
    const double sq = xi.xi_sq_sum();
    const bool ok = g.i_a + g.i_b <= sq + 1e-9 && sq <= 1 + 1e-9 &&
                    g.i_a <= xi.xi_a * xi.xi_a + 1e-9 && g.i_b <= xi.xi_b * xi.xi_b + 1e-9;
    if (!ok) ++bad;
    max_total = std::max(max_total, g.total);
    max_xi_sq = std::max(max_xi_sq, sq);
    max_slack = std::max(max_slack, g.total - sq);
    max_channel_slack = std::max(
        {max_channel_slack, g.i_a - xi.xi_a * xi.xi_a, g.i_b - xi.xi_b * xi.xi_b});
  }
  return {bad == 0, fmt("1000 configs, %zu violations; max I_total %.6f, max xi^2 sum %.6f, "
                        "max(I_total - xi^2 sum) %.3g, max(I_w - xi_w^2) %.3g (tol 1e-9)",
                        bad, max_total, max_xi_sq, max_slack, max_channel_slack)};
}

Outcome criterion6() {
  RandomStream rng(6);
  double eps = 0.0, gap = 0.0, dist = 0.0;
  for (int n = 0; n < 100; ++n) {
    Ket<1> v;
    v << Complex(rng.uniform() - 0.5, rng.uniform() - 0.5),
        Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    const QubitState psi = QubitState::normalized(v);
    const EquatorDirection a(2 * kPi * rng.uniform()), b(2 * kPi * rng.uniform());
    eps = std::max(eps, noise_epsilon(swap_op(), psi, a));
    const MeterExpectations m = meter_expectations(swap_op(), psi, a);
    gap = std::max(gap, std::abs(m.meter_out - m.observable_in));
    dist = std::max(dist, disturbance_eta(identity_op(), psi, b));
  }
  return {eps < 1e-12 && gap < 1e-12 && dist < 1e-12,
          fmt("100 random states: max eps(swap) %.3g, max |<M_out> - <A_in>| %.3g, "
              "max disturbance(identity) %.3g (all < 1e-12)",
              eps, gap, dist)};
}

Outcome criterion7() {
  const ProtocolConfig cfg = fixed(kOrthogonal, kPi / 4, EquatorDirection(kPi / 4), 100000, 7);
  const TrialRun first = run_trials(cfg);
  const TrialRun second = run_trials(cfg);
  const ChannelStats exact = exact_statistics(cfg);
  double worst_z = 0.0;
  for (auto table : {&ChannelStats::joint_a, &ChannelStats::joint_b}) {
    for (int x = 0; x < 2; ++x)
      for (int g = 0; g < 2; ++g) {
        const double p = (exact.*table)[x][g];
        const double se = std::sqrt(p * (1 - p) / 1e5);
        worst_z = std::max(worst_z, std::abs((first.stats.*table)[x][g] - p) / se);
      }
  }
  const bool identical = first.records == second.records;
  return {worst_z < 4.0 && identical,
          fmt("1e5 trials, seed 7: max cell deviation %.2f standard errors (< 4), transcripts "
              "%s across two runs",
              worst_z, identical ? "identical" : "DIFFERENT")};
}

Outcome criterion8() {
  std::size_t both_one = 0;
  double best_min_orth = 0.0, at_eta = 0.0, at_delta = 0.0;
  for (const QuadrantPartition& axes : axis_pairs()) {
    const bool orthogonal =
        axes.axis_a() == kOrthogonal.axis_a() && axes.axis_b() == kOrthogonal.axis_b();
    for (int i = 0; i <= 180; ++i) {
      const double eta = i * (kPi / 2) / 180;
      for (int j = 0; j < 720; ++j) {
        const double delta = j * 2 * kPi / 720;
        const BiasParameters xi =
            bias_parameters(axes, axes.axis_a().rotated(delta), ClonerAngle(eta));
        if (xi.xi_a >= 1 - 1e-12 && xi.xi_b >= 1 - 1e-12) ++both_one;
        const double m = std::min(xi.xi_a, xi.xi_b);
        if (orthogonal && m > best_min_orth) {
          best_min_orth = m;
          at_eta = eta;
          at_delta = delta;
        }
      }
    }
  }
  return {both_one == 0 && std::abs(best_min_orth - 0.5) < 1e-9,
          fmt("4 axis pairs x 181 x 720 grid: %zu points with xi_A = xi_B = 1; orthogonal axes "
              "max min(xi_A, xi_B) = %.12f (0.5 +- 1e-9) at eta %.6f, delta %.6f",
              both_one, best_min_orth, at_eta, at_delta)};
}

Outcome criterion9() {
  const std::uint64_t n = 10000;
  const ProtocolConfig cfg = fixed(kOrthogonal, kPi / 4, EquatorDirection(kPi / 4), n, 9);
  NetsimOptions options;
  options.timeout = std::chrono::milliseconds(20000);
  const LoopbackResult run = run_loopback(cfg, options);
  const bool identical = run.alice.completed && run.alice.records == run_trials(cfg, 1).records;
  const bool audit = run.bob.audit.classical_bits_observed == n &&
                     run.bob.audit.quantum_fabric_messages == n && run.bob.audit.trials == n;

  options.ablate_classical = true;
  const LoopbackResult ablated = run_loopback(cfg, options);
  const InformationGain g = information_gain(ablated.alice.stats, std::nullopt, 1.0);
  const double floor = independent_mi_noise_floor(n);
  const bool below = ablated.alice.completed && g.i_a < floor && g.i_b < floor;
  return {identical && audit && below,
          fmt("1e4 trials: transcript %s in-process run, %llu classical bits audited; ablation "
              "I_A = %.3g, I_B = %.3g vs 4-sigma floor %.3g",
              identical ? "identical to" : "DIFFERS from",
              static_cast<unsigned long long>(run.bob.audit.classical_bits_observed), g.i_a, g.i_b,
              floor)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "bias formula vs density-matrix engine", 5.0, criterion1},
      {2, "optimum on orthogonal axes", 10.0, criterion2},
      {3, "full cloning reads one bit", 1e9, criterion3},
      {4, "Evans-Schulman numeric witness", 1.0, criterion4},
      {5, "information causality on random configs", 30.0, criterion5},
      {6, "Ozawa limiting cases", 1e9, criterion6},
      {7, "Monte Carlo consistency", 10.0, criterion7},
      {8, "no perfect joint readout", 1e9, criterion8},
      {9, "two-endpoint run", 60.0, criterion9},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::string budget = c.budget_s < 1e8 ? fmt(" (budget %.0f s)", c.budget_s) : "";
    std::printf("[%s] %d %s: %s; %.3f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, budget.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
