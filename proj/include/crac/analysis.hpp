#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crac/geometry.hpp"
#include "crac/infotheory.hpp"
#include "crac/machines.hpp"
#include "crac/protocol.hpp"

namespace crac {

/// Closed-form bias parameters: xi_A = |a.phi| sin(eta), xi_B = |b.phi| cos(eta).
BiasParameters bias_parameters(const QuadrantPartition& axes, EquatorDirection phi,
                               ClonerAngle eta);

/// The alternative labeling with sin and cos exchanged between the channels.
BiasParameters swapped_bias_parameters(const QuadrantPartition& axes, EquatorDirection phi,
                                       ClonerAngle eta);

/// xi_w = 2 p_success - 1 from the exact density-matrix engine.
BiasParameters engine_bias(const QuadrantPartition& axes, EquatorDirection phi, ClonerAngle eta);

/// Prior-weighted mean of the closed-form bias over the directions Alice
/// uses: the quadrant representatives (fixed mode) or the uniform quadrant
/// arcs (uniform mode, integrated analytically).
BiasParameters effective_bias(const ProtocolConfig& cfg);

/// Parameter grid; delta is the angle of phi measured from axis_a.
class SweepGrid {
 public:
  /// Throws ContractViolation on empty or non-increasing lists, or cloner
  /// angles outside [0, pi/2].
  SweepGrid(std::vector<double> eta_values, std::vector<double> delta_values,
            QuadrantPartition axes);

  /// n_eta values spanning [0, pi/2] and n_delta spanning [delta_lo, delta_hi].
  static SweepGrid uniform(int n_eta, int n_delta, double delta_lo, double delta_hi,
                           QuadrantPartition axes);

  const std::vector<double>& eta_values() const { return eta_values_; }
  const std::vector<double>& delta_values() const { return delta_values_; }
  const QuadrantPartition& axes() const { return axes_; }

 private:
  std::vector<double> eta_values_;
  std::vector<double> delta_values_;
  QuadrantPartition axes_;
};

struct Eq10Report {
  std::size_t points = 0;
  /// Max |closed form - engine| over both channels, main-text labeling.
  double max_deviation = 0.0;
  /// Same for the labeling with sin and cos exchanged.
  double max_deviation_swapped = 0.0;
  double worst_eta = 0.0;
  double worst_delta = 0.0;
  /// "sin-A/cos-B" or "cos-A/sin-B": the labeling that agrees with the engine.
  std::string matched_labeling;
  bool pass = false;
};

inline constexpr double kEq10Tolerance = 1e-10;

/// Compares the closed-form bias to the engine at every (eta, delta) of the
/// grid. `negate_closed_form` flips the sign of the closed form to exercise
/// the failure path.
Eq10Report verify_eq10(const SweepGrid& grid, bool negate_closed_form = false);

struct SweepRow {
  double eta = 0.0;
  double delta = 0.0;
  double xi_a = 0.0;
  double xi_b = 0.0;
  double xi_sq_sum = 0.0;
  double i_a = 0.0;
  double i_b = 0.0;
  double i_total = 0.0;
};

/// One row per (eta, delta), row-major in (eta, delta). Each cell is the exact
/// statistics of the fixed-phi configuration anchored at axis_a + delta with a
/// uniform prior. Rows are computed on `threads` workers.
std::vector<SweepRow> sweep(const SweepGrid& grid, unsigned threads = 1);

/// Header eta,delta,xi_a,xi_b,xi_sq_sum,i_a,i_b,i_total; 9 decimals.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

enum class Objective { XiSqSum, MutualInfoTotal };

/// Objective at (eta, delta) from the closed-form bias: xi_A^2 + xi_B^2, or
/// the summed information of the two symmetric channels.
double gain_objective(const QuadrantPartition& axes, Objective objective, double eta,
                      double delta);

/// delta range [lo, hi] between the two axes (the arc from axis_a to axis_b
/// shorter than pi).
std::pair<double, double> delta_range(const QuadrantPartition& axes);

struct OptimizeResult {
  /// Cloner angle maximizing the worst case over encoding directions.
  double eta = 0.0;
  /// Encoding direction minimizing the best case over cloner angles.
  double delta = 0.0;
  /// Objective at (eta, delta): the guaranteed gain.
  double value = 0.0;
  /// max_eta min_delta and min_delta max_eta of the objective.
  double lower_value = 0.0;
  double upper_value = 0.0;
  /// Largest objective anywhere on the coarse grid.
  double grid_max = 0.0;
};

inline constexpr int kOptimizeGridPoints = 181;
inline constexpr double kGoldenTolerance = 1e-10;

/// Equilibrium of the cloner against the unknown encoding direction: coarse
/// 181 x 181 scan, then golden-section refinement of each coordinate to 1e-10.
OptimizeResult optimize_gain(const QuadrantPartition& axes, Objective objective);

/// One named comparison inside a case study.
struct CaseCheck {
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool pass() const;
};

struct CaseReport {
  char which = 'A';
  std::string summary;
  std::vector<CaseCheck> checks;
  bool pass() const;
};

CaseReport case_study(char which);

/// Margin xi^2 - (1 - H((1 + xi) / 2)) on xi = 0, step, 2 step, ..., 1.
struct EsGridReport {
  std::size_t points = 0;
  double min_margin = 0.0;
  double worst_xi = 0.0;
  /// Smallest margin away from the endpoints xi = 0 and xi = 1.
  double min_interior_margin = 0.0;
  double margin_at_zero = 0.0;
  double margin_at_one = 0.0;
  bool pass = false;
};

/// Throws ContractViolation unless 1 / step is a positive integer within 1e-9.
EsGridReport evans_schulman_grid(double step);

struct IcReport {
  std::size_t configs = 0;
  std::size_t violations = 0;
  double max_total = 0.0;
  /// Largest i_a + i_b - (xi_A^2 + xi_B^2), and the same per channel.
  double max_total_slack = 0.0;
  double max_channel_slack = 0.0;
  /// First offending configuration, if any.
  std::optional<ProtocolConfig> first_violation;
  bool pass = false;
};

/// Exact information gain of `count` random fixed-phi configurations (random
/// axes, cloner angle and anchor) checked against xi_A^2 + xi_B^2 and 1.
IcReport information_causality_check(std::size_t count, std::uint64_t seed);

}  // namespace crac
