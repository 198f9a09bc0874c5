#include "crac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace crac {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
double golden_argmax(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  // The bracket may have collapsed onto an endpoint of the original range.
  const double mid = 0.5 * (lo + hi);
  double best = mid, fbest = f(mid);
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return v;
}

/// Refines the extremum of `f` near grid index k over the grid's neighbours.
/// `sense` is +1 for maximization and -1 for minimization.
double refine_on_grid(const std::function<double(double)>& f, const std::vector<double>& grid,
                      int sense) {
  std::size_t k = 0;
  double best = sense * f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = sense * f(grid[i]);
    if (v > best) {
      best = v;
      k = i;
    }
  }
  const double lo = grid[k == 0 ? 0 : k - 1];
  const double hi = grid[std::min(k + 1, grid.size() - 1)];
  return golden_argmax([&](double x) { return sense * f(x); }, lo, hi, kGoldenTolerance);
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

BiasParameters bias_parameters(const QuadrantPartition& axes, EquatorDirection phi,
                               ClonerAngle eta) {
  return {clamp_unit(std::abs(axes.axis_a().dot(phi)) * std::sin(eta.value())),
          clamp_unit(std::abs(axes.axis_b().dot(phi)) * std::cos(eta.value()))};
}

BiasParameters swapped_bias_parameters(const QuadrantPartition& axes, EquatorDirection phi,
                                       ClonerAngle eta) {
  return {clamp_unit(std::abs(axes.axis_a().dot(phi)) * std::cos(eta.value())),
          clamp_unit(std::abs(axes.axis_b().dot(phi)) * std::sin(eta.value()))};
}

BiasParameters engine_bias(const QuadrantPartition& axes, EquatorDirection phi, ClonerAngle eta) {
  const SuccessProbabilities p = success_given_phi(axes, Apparatus::standard(eta), phi);
  return {clamp_unit(2.0 * p.a - 1.0), clamp_unit(2.0 * p.b - 1.0)};
}

BiasParameters effective_bias(const ProtocolConfig& cfg) {
  cfg.validate();
  double mean_a = 0.0, mean_b = 0.0;
  for (DatabaseBits bits : all_database_bits()) {
    const double w = cfg.bits_prior[static_cast<std::size_t>(bits.index())];
    if (w <= 0.0) continue;
    if (cfg.fixed_phi()) {
      const EquatorDirection phi = cfg.representative(bits);
      mean_a += w * std::abs(cfg.axes.axis_a().dot(phi));
      mean_b += w * std::abs(cfg.axes.axis_b().dot(phi));
      continue;
    }
    // The sign of each dot product is constant on a quadrant arc, so the mean
    // of |cos(phi - w)| is |sin(end - w) - sin(start - w)| / length.
    const Arc arc = cfg.axes.arc(bits);
    auto mean_abs_cos = [&](EquatorDirection axis) {
      const double s = arc.start - axis.angle();
      return std::abs(std::sin(s + arc.length) - std::sin(s)) / arc.length;
    };
    mean_a += w * mean_abs_cos(cfg.axes.axis_a());
    mean_b += w * mean_abs_cos(cfg.axes.axis_b());
  }
  const double eta = cfg.cloner_eta.value();
  return {clamp_unit(mean_a * std::sin(eta)), clamp_unit(mean_b * std::cos(eta))};
}

// ---------------------------------------------------------------- SweepGrid

SweepGrid::SweepGrid(std::vector<double> eta_values, std::vector<double> delta_values,
                     QuadrantPartition axes)
    : eta_values_(std::move(eta_values)), delta_values_(std::move(delta_values)), axes_(axes) {
  if (eta_values_.empty() || delta_values_.empty()) {
    throw ContractViolation("sweep grid lists must be nonempty");
  }
  if (!strictly_increasing(eta_values_) || !strictly_increasing(delta_values_)) {
    throw ContractViolation("sweep grid lists must be strictly increasing");
  }
  for (double eta : eta_values_) ClonerAngle{eta};
}

SweepGrid SweepGrid::uniform(int n_eta, int n_delta, double delta_lo, double delta_hi,
                             QuadrantPartition axes) {
  if (n_eta < 1 || n_delta < 1) throw ContractViolation("grid sizes must be positive");
  return SweepGrid(linspace(0.0, kHalfPi, n_eta), linspace(delta_lo, delta_hi, n_delta), axes);
}

// ------------------------------------------------------------- verify_eq10

Eq10Report verify_eq10(const SweepGrid& grid, bool negate_closed_form) {
  Eq10Report report;
  const double sign = negate_closed_form ? -1.0 : 1.0;
  for (double eta_value : grid.eta_values()) {
    const ClonerAngle eta(eta_value);
    for (double delta : grid.delta_values()) {
      const EquatorDirection phi = grid.axes().axis_a().rotated(delta);
      const BiasParameters engine = engine_bias(grid.axes(), phi, eta);
      const BiasParameters main = bias_parameters(grid.axes(), phi, eta);
      const BiasParameters swapped = swapped_bias_parameters(grid.axes(), phi, eta);
      const double dev = std::max(std::abs(sign * main.xi_a - engine.xi_a),
                                  std::abs(sign * main.xi_b - engine.xi_b));
      const double dev_swapped = std::max(std::abs(sign * swapped.xi_a - engine.xi_a),
                                          std::abs(sign * swapped.xi_b - engine.xi_b));
      if (dev > report.max_deviation || report.points == 0) {
        report.max_deviation = dev;
        report.worst_eta = eta_value;
        report.worst_delta = delta;
      }
      report.max_deviation_swapped = std::max(report.max_deviation_swapped, dev_swapped);
      ++report.points;
    }
  }
  report.matched_labeling = report.max_deviation <= report.max_deviation_swapped
                                ? "sin-A/cos-B"
                                : "cos-A/sin-B";
  report.pass = report.max_deviation < kEq10Tolerance;
  return report;
}

// -------------------------------------------------------------------- sweep

std::vector<SweepRow> sweep(const SweepGrid& grid, unsigned threads) {
  const auto& etas = grid.eta_values();
  const auto& deltas = grid.delta_values();
  std::vector<SweepRow> rows(etas.size() * deltas.size());

  auto fill = [&](std::size_t index) {
    const double eta = etas[index / deltas.size()];
    const double delta = deltas[index % deltas.size()];
    const ProtocolConfig cfg{.axes = grid.axes(),
                             .cloner_eta = ClonerAngle(eta),
                             .phi_mode = FixedPhi{grid.axes().axis_a().rotated(delta)}};
    const BiasParameters xi = effective_bias(cfg);
    const InformationGain gain = information_gain(exact_statistics(cfg));
    rows[index] = {eta, delta, xi.xi_a, xi.xi_b, xi.xi_sq_sum(), gain.i_a, gain.i_b, gain.total};
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) fill(i);
    return rows;
  }
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < rows.size(); i += threads) fill(i);
    });
  }
  for (auto& w : workers) w.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "eta,delta,xi_a,xi_b,xi_sq_sum,i_a,i_b,i_total\n";
  char line[512];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof line, "%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", r.eta, r.delta,
                  r.xi_a, r.xi_b, r.xi_sq_sum, r.i_a, r.i_b, r.i_total);
    out << line;
  }
}

// ----------------------------------------------------------------- optimize

double gain_objective(const QuadrantPartition& axes, Objective objective, double eta,
                      double delta) {
  const BiasParameters xi =
      bias_parameters(axes, axes.axis_a().rotated(delta), ClonerAngle(std::clamp(eta, 0.0, kHalfPi)));
  if (objective == Objective::XiSqSum) return xi.xi_sq_sum();
  return bsc_information(xi.xi_a) + bsc_information(xi.xi_b);
}

std::pair<double, double> delta_range(const QuadrantPartition& axes) {
  double gap = normalize_angle(axes.axis_b().angle() - axes.axis_a().angle());
  if (gap > kPi) gap -= 2.0 * kPi;
  return gap > 0.0 ? std::pair{0.0, gap} : std::pair{gap, 0.0};
}

OptimizeResult optimize_gain(const QuadrantPartition& axes, Objective objective) {
  const auto [d_lo, d_hi] = delta_range(axes);
  const std::vector<double> etas = linspace(0.0, kHalfPi, kOptimizeGridPoints);
  const std::vector<double> deltas = linspace(d_lo, d_hi, kOptimizeGridPoints);
  auto f = [&](double eta, double delta) { return gain_objective(axes, objective, eta, delta); };

  OptimizeResult result;
  for (double e : etas)
    for (double d : deltas) result.grid_max = std::max(result.grid_max, f(e, d));

  // Worst case over delta for a given eta, and best case over eta for a given delta.
  auto worst_over_delta = [&](double eta) {
    const double d = refine_on_grid([&](double x) { return f(eta, x); }, deltas, -1);
    return f(eta, d);
  };
  auto best_over_eta = [&](double delta) {
    const double e = refine_on_grid([&](double x) { return f(x, delta); }, etas, +1);
    return f(e, delta);
  };

  result.eta = refine_on_grid(worst_over_delta, etas, +1);
  result.delta = refine_on_grid(best_over_eta, deltas, -1);
  result.lower_value = worst_over_delta(result.eta);
  result.upper_value = best_over_eta(result.delta);
  result.value = f(result.eta, result.delta);
  return result;
}

// -------------------------------------------------------------- case study

bool CaseCheck::pass() const { return std::abs(value - expected) <= tolerance; }

bool CaseReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CaseCheck& c) { return c.pass(); });
}

CaseReport case_study(char which) {
  const QuadrantPartition orthogonal{EquatorDirection(0.0), EquatorDirection(kHalfPi)};
  CaseReport report;
  report.which = which;

  switch (which) {
    case 'A': case 'a': {
      report.which = 'A';
      report.summary =
          "xi_A = 1 needs sin(eta) = |a.phi| = 1, which forces xi_B = cos(eta) = 0; the "
          "cloner degenerates to a swap and channel A carries one full bit (and symmetrically "
          "for xi_B = 1 with the identity).";
      for (bool channel_a : {true, false}) {
        const double eta = channel_a ? kHalfPi : 0.0;
        const EquatorDirection phi = channel_a ? orthogonal.axis_a() : orthogonal.axis_b();
        const ProtocolConfig cfg{.axes = orthogonal,
                                 .cloner_eta = ClonerAngle(eta),
                                 .phi_mode = FixedPhi{phi}};
        const BiasParameters xi = bias_parameters(orthogonal, phi, cfg.cloner_eta);
        const InformationGain gain = information_gain(exact_statistics(cfg));
        const std::string tag = channel_a ? "xi_A=1: " : "xi_B=1: ";
        report.checks.push_back({tag + "xi_A", xi.xi_a, channel_a ? 1.0 : 0.0, 1e-12});
        report.checks.push_back({tag + "xi_B", xi.xi_b, channel_a ? 0.0 : 1.0, 1e-12});
        report.checks.push_back({tag + "I_A", gain.i_a, channel_a ? 1.0 : 0.0, 1e-9});
        report.checks.push_back({tag + "I_B", gain.i_b, channel_a ? 0.0 : 1.0, 1e-9});
      }
      break;
    }
    case 'B': case 'b': {
      report.which = 'B';
      report.summary =
          "With symmetric cloning xi_A^2 + xi_B^2 = (|a.phi|^2 + |b.phi|^2) / 2, which reaches "
          "1 only if |a.phi| = |b.phi| = 1, i.e. b parallel or antiparallel to a. For axes at "
          "angle theta the best direction gives (1 + |cos theta|) / 2.";
      const ClonerAngle eta(kPi / 4.0);
      for (double theta : {kHalfPi, kPi / 3.0, kPi / 12.0}) {
        const QuadrantPartition axes{EquatorDirection(0.0), EquatorDirection(theta)};
        double best = 0.0;
        for (int k = 0; k < 3600; ++k) {
          const EquatorDirection phi(kTwoPi * k / 3600.0);
          best = std::max(best, bias_parameters(axes, phi, eta).xi_sq_sum());
        }
        char name[96];
        std::snprintf(name, sizeof name, "max_phi xi^2 sum, axes %.4f apart", theta);
        report.checks.push_back({name, best, (1.0 + std::abs(std::cos(theta))) / 2.0, 1e-6});
      }
      // The one-bit condition needs both dot products to be 1 at once.
      double closest = 0.0;
      for (int k = 0; k < 3600; ++k) {
        const EquatorDirection phi(kTwoPi * k / 3600.0);
        closest = std::max(closest, std::min(std::abs(orthogonal.axis_a().dot(phi)),
                                             std::abs(orthogonal.axis_b().dot(phi))));
      }
      report.checks.push_back({"orthogonal axes: max_phi min(|a.phi|, |b.phi|)", closest,
                               1.0 / std::numbers::sqrt2, 1e-6});
      break;
    }
    case 'C': case 'c': {
      report.which = 'C';
      report.summary =
          "Orthogonal axes with a.phi = cos(delta), b.phi = sin(delta): symmetric cloning at "
          "delta = pi/4 is the equilibrium of xi_A^2 + xi_B^2, worth 1/2; the channel "
          "information there is 2(1 - H(3/4)).";
      const OptimizeResult xi = optimize_gain(orthogonal, Objective::XiSqSum);
      const OptimizeResult mi = optimize_gain(orthogonal, Objective::MutualInfoTotal);
      report.checks.push_back({"eta*", xi.eta, kPi / 4.0, 1e-6});
      report.checks.push_back({"delta*", xi.delta, kPi / 4.0, 1e-6});
      report.checks.push_back({"xi_A^2 + xi_B^2 at optimum", xi.value, 0.5, 1e-9});
      report.checks.push_back({"mutual information at optimum", mi.value,
                               2.0 * bsc_information(0.5), 1e-9});
      const ProtocolConfig cfg{.axes = orthogonal,
                               .cloner_eta = ClonerAngle(xi.eta),
                               .phi_mode = FixedPhi{orthogonal.axis_a().rotated(xi.delta)}};
      report.checks.push_back({"engine information at optimum",
                               information_gain(exact_statistics(cfg)).total,
                               2.0 * bsc_information(0.5), 1e-9});
      break;
    }
    default:
      throw ContractViolation(std::string("unknown case study: ") + which);
  }
  return report;
}

// ------------------------------------------------------- bound witnesses

EsGridReport evans_schulman_grid(double step) {
  if (!(step > 0.0) || step > 1.0) throw ContractViolation("grid step must lie in (0, 1]");
  const double intervals = 1.0 / step;
  const auto n = static_cast<std::size_t>(std::llround(intervals));
  if (std::abs(intervals - static_cast<double>(n)) > 1e-9 * intervals) {
    throw ContractViolation("grid step must divide 1");
  }
  EsGridReport r;
  r.min_margin = r.min_interior_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= n; ++k) {
    const double xi = static_cast<double>(k) / static_cast<double>(n);
    const double margin = evans_schulman_bound(xi) - bsc_information(xi);
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.worst_xi = xi;
    }
    if (k == 0) r.margin_at_zero = margin;
    if (k == n) r.margin_at_one = margin;
    if (k != 0 && k != n) r.min_interior_margin = std::min(r.min_interior_margin, margin);
    ++r.points;
  }
  r.pass = r.min_margin >= 0.0 && std::abs(r.margin_at_zero) < 1e-9 &&
           std::abs(r.margin_at_one) < 1e-9 && (n < 2 || r.min_interior_margin > 0.0);
  return r;
}

IcReport information_causality_check(std::size_t count, std::uint64_t seed) {
  RandomStream rng(seed);
  IcReport r;
  r.max_total_slack = r.max_channel_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double a = 2.0 * kPi * rng.uniform();
    // Keep the axes at least 0.05 rad away from parallel.
    const double gap = 0.05 + (kPi - 0.1) * rng.uniform();
    ProtocolConfig cfg{.axes = QuadrantPartition(EquatorDirection(a), EquatorDirection(a + gap)),
                       .cloner_eta = ClonerAngle(kHalfPi * rng.uniform())};
    cfg.phi_mode = FixedPhi{EquatorDirection(2.0 * kPi * rng.uniform())};
    const BiasParameters xi = effective_bias(cfg);
    const InformationGain gain = information_gain(exact_statistics(cfg), xi);
    r.max_total = std::max(r.max_total, gain.total);
    r.max_total_slack = std::max(r.max_total_slack, gain.total - xi.xi_sq_sum());
    r.max_channel_slack = std::max({r.max_channel_slack, gain.i_a - xi.xi_a * xi.xi_a,
                                    gain.i_b - xi.xi_b * xi.xi_b});
    if (gain.violated()) {
      ++r.violations;
      if (!r.first_violation) r.first_violation = cfg;
    }
    ++r.configs;
  }
  r.pass = r.violations == 0;
  return r;
}

}  // namespace crac
