#include "crac/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "crac/analysis.hpp"
#include "crac/config_io.hpp"
#include "crac/netsim.hpp"
#include "crac/ozawa.hpp"

namespace crac {
namespace {

constexpr double kPi = std::numbers::pi;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw UsageError(std::string(what) + " must be a nonnegative integer, got '" + text + "'");
  }
  return v;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// A manifest wraps the resolved config under "config"; a plain config file
/// is the object itself.
Json config_object(const std::string& path) {
  Json j = read_json_file(path);
  if (j.is_object() && j.contains("config") && j["config"].is_object()) return j["config"];
  if (!j.is_object()) throw UsageError(path + " does not hold a JSON object");
  return j;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("CRAC_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  return parse_u64(s, "CRAC_SEED");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct ConfigFlags {
  std::string config_path;
  std::string eta;
  std::string axis_a;
  std::string axis_b;
  std::string phi;
  std::string phi_mode;
  std::string trials;
  std::string seed;
  std::string parallel;
};

void add_axis_flags(CLI::App* app, ConfigFlags& f) {
  app->add_option("--axis-a", f.axis_a, "Direction of observable A (radians, pi literals allowed)");
  app->add_option("--axis-b", f.axis_b, "Direction of observable B");
}

void add_config_flags(CLI::App* app, ConfigFlags& f, bool with_parallel) {
  app->add_option("--config", f.config_path, "Config JSON or run manifest; flags override it");
  app->add_option("--eta", f.eta, "Cloner angle in [0, pi/2]");
  add_axis_flags(app, f);
  app->add_option("--phi", f.phi, "Anchor direction; selects fixed mode");
  app->add_option("--phi-mode", f.phi_mode, "fixed or uniform")
      ->check(CLI::IsMember({"fixed", "uniform"}));
  app->add_option("--trials", f.trials, "Number of rounds");
  app->add_option("--seed", f.seed, "Seed (default: $CRAC_SEED, else 0)");
  if (with_parallel) app->add_option("--parallel", f.parallel, "Worker threads / shards");
}

struct Resolved {
  ProtocolConfig cfg;
  unsigned parallel = 1;
};

Resolved resolve_config(const ConfigFlags& f, std::uint64_t default_trials) {
  Json j = {{"axis_a", 0.0}, {"axis_b", "pi/2"}, {"cloner_eta", "pi/4"}, {"trials", default_trials}};
  if (auto s = env_seed()) j["seed"] = *s;
  if (!f.config_path.empty()) j.update(config_object(f.config_path));
  if (!f.eta.empty()) j["cloner_eta"] = f.eta;
  if (!f.axis_a.empty()) j["axis_a"] = f.axis_a;
  if (!f.axis_b.empty()) j["axis_b"] = f.axis_b;
  if (f.phi_mode == "uniform") {
    if (!f.phi.empty()) throw UsageError("--phi cannot be combined with --phi-mode uniform");
    j.erase("phi");
    j["phi_mode"] = "uniform";
  } else {
    if (!f.phi.empty()) j["phi"] = f.phi;
    if (f.phi_mode == "fixed" || !f.phi.empty()) j["phi_mode"] = "fixed";
  }
  if (!f.trials.empty()) j["trials"] = parse_u64(f.trials, "--trials");
  if (!f.seed.empty()) j["seed"] = parse_u64(f.seed, "--seed");

  Resolved r{.cfg = config_from_json(j)};
  if (r.cfg.trials == 0) throw UsageError("--trials must be positive");
  if (!f.parallel.empty()) {
    r.parallel = static_cast<unsigned>(parse_u64(f.parallel, "--parallel"));
  } else if (j.contains("parallel")) {
    r.parallel = j["parallel"].get<unsigned>();
  }
  if (r.parallel == 0) throw UsageError("--parallel must be positive");
  return r;
}

QuadrantPartition resolve_axes(const ConfigFlags& f) {
  return QuadrantPartition(EquatorDirection(f.axis_a.empty() ? 0.0 : parse_angle(f.axis_a)),
                           EquatorDirection(f.axis_b.empty() ? kPi / 2 : parse_angle(f.axis_b)));
}

Json with_success(Json gain, const ChannelStats& stats) {
  gain["success_a"] = success_probability(stats.joint_a);
  gain["success_b"] = success_probability(stats.joint_b);
  return gain;
}

/// Allowance for comparing sampled information values to exact bounds.
double sampling_allowance(std::uint64_t n) {
  return independent_mi_noise_floor(n) + 4.0 / std::sqrt(static_cast<double>(n));
}

/// Largest |empirical - exact| over all cells in binomial standard errors.
double max_cell_z(const ChannelStats& sampled, const ChannelStats& exact) {
  double worst = 0.0;
  const double n = static_cast<double>(sampled.trials);
  auto scan = [&](const JointTable& s, const JointTable& e) {
    for (int x = 0; x < 2; ++x) {
      for (int g = 0; g < 2; ++g) {
        const double p = e[x][g];
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
        const double diff = std::abs(s[x][g] - p);
        if (se > 0.0) {
          worst = std::max(worst, diff / se);
        } else if (diff > 0.0) {
          worst = std::numeric_limits<double>::infinity();
        }
      }
    }
  };
  scan(sampled.joint_a, exact.joint_a);
  scan(sampled.joint_b, exact.joint_b);
  return worst;
}

// ----------------------------------------------------------------- simulate

struct SimulateFlags {
  ConfigFlags config;
  std::string output;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  const Resolved r = resolve_config(f.config, 10000);
  const ProtocolConfig& cfg = r.cfg;
  const TrialRun run = run_trials(cfg, r.parallel);
  const ChannelStats exact = exact_statistics(cfg);
  const BiasParameters xi = effective_bias(cfg);
  const InformationGain sampled_gain =
      information_gain(run.stats, xi, sampling_allowance(cfg.trials));
  const InformationGain exact_gain = information_gain(exact, xi);

  Json config_json = to_json(cfg);
  config_json["parallel"] = r.parallel;
  Json summary = {{"subcommand", "simulate"},
                  {"config", config_json},
                  {"config_hash", config_hash(cfg)},
                  {"bias", to_json(xi)},
                  {"sampled", with_success(to_json(sampled_gain), run.stats)},
                  {"exact", with_success(to_json(exact_gain), exact)},
                  {"max_cell_z", max_cell_z(run.stats, exact)},
                  {"classical_bits_used", run.stats.classical_bits_used},
                  {"pass", !exact_gain.violated()}};

  if (!f.output.empty()) {
    std::ofstream csv(f.output);
    if (!csv) throw std::runtime_error("cannot write " + f.output);
    write_trials_csv(csv, run.records);
    csv.close();
    const std::string stats_path = f.output + ".stats.json";
    write_text(stats_path, Json{{"sampled", to_json(run.stats)}, {"exact", to_json(exact)}}.dump(2) + "\n");
    const std::string manifest = write_manifest(
        {.subcommand = "simulate", .config = config_json, .seed = cfg.seed,
         .outputs = {f.output, stats_path}});
    summary["outputs"] = {f.output, stats_path, manifest};
  }
  out << summary.dump(2) << '\n';
  return exact_gain.violated() ? kExitBoundViolation : kExitOk;
}

// ------------------------------------------------------------------- verify

struct VerifyFlags {
  double es_step = 1e-3;
  std::size_t ic_configs = 1000;
  int eq10_points = 20;
  std::string seed;
  std::string self_test;
  std::string output;
};

std::vector<QuadrantPartition> verification_axes() {
  return {QuadrantPartition(EquatorDirection(0.0), EquatorDirection(kPi / 2)),
          QuadrantPartition(EquatorDirection(0.0), EquatorDirection(kPi / 3)),
          QuadrantPartition(EquatorDirection(kPi / 6), EquatorDirection(kPi)),
          QuadrantPartition(EquatorDirection(0.3), EquatorDirection(5.0))};
}

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
  if (f.eq10_points < 2) throw UsageError("--eq10-points must be at least 2");
  std::uint64_t seed = env_seed().value_or(0);
  if (!f.seed.empty()) seed = parse_u64(f.seed, "--seed");
  const bool negate = f.self_test == "negate-xi";
  bool pass = true;

  Json eq10 = Json::array();
  double eq10_max = 0.0;
  for (const QuadrantPartition& axes : verification_axes()) {
    const double step = 2.0 * kPi / f.eq10_points;
    const SweepGrid grid = SweepGrid::uniform(f.eq10_points, f.eq10_points, 0.0,
                                              2.0 * kPi - step, axes);
    const Eq10Report rep = verify_eq10(grid, negate);
    eq10_max = std::max(eq10_max, rep.max_deviation);
    eq10.push_back({{"axis_a", axes.axis_a().angle()},
                    {"axis_b", axes.axis_b().angle()},
                    {"points", rep.points},
                    {"max_deviation", rep.max_deviation},
                    {"max_deviation_swapped", rep.max_deviation_swapped},
                    {"matched_labeling", rep.matched_labeling},
                    {"worst_eta", rep.worst_eta},
                    {"worst_delta", rep.worst_delta},
                    {"pass", rep.pass}});
    if (!rep.pass) {
      pass = false;
      err << "bias formula deviates by " << rep.max_deviation << " at axes ("
          << axes.axis_a().angle() << ", " << axes.axis_b().angle() << "), eta "
          << rep.worst_eta << ", delta " << rep.worst_delta << '\n';
    }
  }

  const EsGridReport es = evans_schulman_grid(f.es_step);
  if (!es.pass) {
    pass = false;
    err << "Evans-Schulman margin " << es.min_margin << " at xi " << es.worst_xi << '\n';
  }

  const IcReport ic = information_causality_check(f.ic_configs, seed);
  Json ic_json = {{"configs", ic.configs},
                  {"violations", ic.violations},
                  {"max_total", ic.max_total},
                  {"max_total_slack", ic.max_total_slack},
                  {"max_channel_slack", ic.max_channel_slack},
                  {"seed", seed},
                  {"pass", ic.pass}};
  if (ic.first_violation) {
    ic_json["first_violation"] = to_json(*ic.first_violation);
    err << "information bound violated for " << to_json(*ic.first_violation).dump() << '\n';
  }
  pass = pass && ic.pass;

  Json report = {{"subcommand", "verify"},
                 {"self_test", negate ? "negate-xi" : "none"},
                 {"eq10", eq10},
                 {"eq10_max_deviation", eq10_max},
                 {"evans_schulman",
                  {{"step", f.es_step},
                   {"points", es.points},
                   {"min_margin", es.min_margin},
                   {"min_interior_margin", es.min_interior_margin},
                   {"margin_at_zero", es.margin_at_zero},
                   {"margin_at_one", es.margin_at_one},
                   {"pass", es.pass}}},
                 {"information_causality", ic_json},
                 {"pass", pass}};
  if (!f.output.empty()) {
    write_text(f.output, report.dump(2) + "\n");
    Json params = {{"es_grid_step", f.es_step},
                   {"ic_configs", f.ic_configs},
                   {"eq10_points", f.eq10_points},
                   {"self_test", f.self_test}};
    write_manifest({.subcommand = "verify", .config = params, .seed = seed, .outputs = {f.output}});
  }
  out << report.dump(2) << '\n';
  return pass ? kExitOk : kExitBoundViolation;
}

// -------------------------------------------------------------------- sweep

struct SweepFlags {
  ConfigFlags axes;
  std::string config_path;
  int n_eta = 19;
  int n_delta = 19;
  std::string delta_lo;
  std::string delta_hi;
  std::string parallel;
  std::string output;
};

SweepGrid resolve_grid(const SweepFlags& f) {
  if (!f.config_path.empty()) {
    const Json j = config_object(f.config_path);
    if (!j.contains("eta_values") || !j.contains("delta_values")) {
      throw UsageError(f.config_path + " is not a sweep manifest");
    }
    return SweepGrid(j["eta_values"].get<std::vector<double>>(),
                     j["delta_values"].get<std::vector<double>>(),
                     QuadrantPartition(EquatorDirection(j["axis_a"].get<double>()),
                                       EquatorDirection(j["axis_b"].get<double>())));
  }
  const QuadrantPartition axes = resolve_axes(f.axes);
  auto [lo, hi] = delta_range(axes);
  if (!f.delta_lo.empty()) lo = parse_angle(f.delta_lo);
  if (!f.delta_hi.empty()) hi = parse_angle(f.delta_hi);
  return SweepGrid::uniform(f.n_eta, f.n_delta, lo, hi, axes);
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  const SweepGrid grid = resolve_grid(f);
  const unsigned threads =
      f.parallel.empty() ? 1u : static_cast<unsigned>(parse_u64(f.parallel, "--parallel"));
  if (threads == 0) throw UsageError("--parallel must be positive");
  const std::vector<SweepRow> rows = sweep(grid, threads);
  if (f.output.empty()) {
    write_sweep_csv(out, rows);
    return kExitOk;
  }
  std::ofstream csv(f.output);
  if (!csv) throw std::runtime_error("cannot write " + f.output);
  write_sweep_csv(csv, rows);
  csv.close();
  const Json grid_json = {{"axis_a", grid.axes().axis_a().angle()},
                          {"axis_b", grid.axes().axis_b().angle()},
                          {"eta_values", grid.eta_values()},
                          {"delta_values", grid.delta_values()}};
  const std::string manifest =
      write_manifest({.subcommand = "sweep", .config = grid_json, .outputs = {f.output}});
  out << Json{{"rows", rows.size()}, {"outputs", {f.output, manifest}}}.dump(2) << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- optimize

struct OptimizeFlags {
  ConfigFlags axes;
  std::string axes_preset;
  std::string objective = "xi";
  bool json = false;
  std::string output;
};

int cmd_optimize(const OptimizeFlags& f, std::ostream& out) {
  if (!f.axes_preset.empty() && (!f.axes.axis_a.empty() || !f.axes.axis_b.empty())) {
    throw UsageError("--axes cannot be combined with --axis-a/--axis-b");
  }
  const QuadrantPartition axes = resolve_axes(f.axes);
  const Objective objective = f.objective == "mi" ? Objective::MutualInfoTotal : Objective::XiSqSum;
  const OptimizeResult r = optimize_gain(axes, objective);
  const Json result = {
      {"axis_a", axes.axis_a().angle()},
      {"axis_b", axes.axis_b().angle()},
      {"objective", f.objective},
      {"eta", r.eta},
      {"delta", r.delta},
      {"value", r.value},
      {"lower_value", r.lower_value},
      {"upper_value", r.upper_value},
      {"grid_max", r.grid_max},
      {"xi_sq_sum", gain_objective(axes, Objective::XiSqSum, r.eta, r.delta)},
      {"total_information", gain_objective(axes, Objective::MutualInfoTotal, r.eta, r.delta)}};
  if (f.json) {
    out << result.dump(2) << '\n';
  } else {
    char line[96];
    std::snprintf(line, sizeof line, "(%.6g, %.6g, %.6g)\n", r.eta, r.delta, r.value);
    out << line;
  }
  if (!f.output.empty()) {
    write_text(f.output, result.dump(2) + "\n");
    const Json params = {{"axis_a", axes.axis_a().angle()},
                         {"axis_b", axes.axis_b().angle()},
                         {"objective", f.objective}};
    write_manifest({.subcommand = "optimize", .config = params, .outputs = {f.output}});
  }
  return kExitOk;
}

// -------------------------------------------------------------------- ozawa

struct OzawaFlags {
  ConfigFlags axes;
  std::string unitary = "swap";
  std::string eta = "pi/4";
  int probe = 0;
  int points = 36;
  std::string output;
};

int cmd_ozawa(const OzawaFlags& f, std::ostream& out) {
  if (f.points < 1) throw UsageError("--points must be positive");
  const QuadrantPartition axes = resolve_axes(f.axes);
  const UnitaryOp u = f.unitary == "identity" ? identity_op()
                      : f.unitary == "swap"   ? swap_op()
                                              : pcc_op(ClonerAngle(parse_angle(f.eta)));
  const QubitState probe = QubitState::basis(f.probe);
  Json rows = Json::array();
  double max_eps = 0.0, max_dist = 0.0, max_gap = 0.0;
  for (int k = 0; k < f.points; ++k) {
    const double angle = 2.0 * kPi * k / f.points;
    const QubitState psi = phase_state(EquatorDirection(angle));
    const double eps = noise_epsilon(u, psi, axes.axis_a(), probe);
    const double dist = disturbance_eta(u, psi, axes.axis_b(), probe);
    const MeterExpectations m = meter_expectations(u, psi, axes.axis_a(), probe);
    max_eps = std::max(max_eps, eps);
    max_dist = std::max(max_dist, dist);
    max_gap = std::max(max_gap, std::abs(m.meter_out - m.observable_in));
    rows.push_back({{"psi", angle},
                    {"epsilon", eps},
                    {"disturbance", dist},
                    {"meter_out", m.meter_out},
                    {"observable_in", m.observable_in}});
  }
  const Json report = {{"unitary", f.unitary},
                       {"axis_a", axes.axis_a().angle()},
                       {"axis_b", axes.axis_b().angle()},
                       {"probe", f.probe},
                       {"points", f.points},
                       {"max_epsilon", max_eps},
                       {"max_disturbance", max_dist},
                       {"max_expectation_gap", max_gap},
                       {"rows", rows}};
  out << report.dump(2) << '\n';
  if (!f.output.empty()) {
    write_text(f.output, report.dump(2) + "\n");
    Json params = {{"unitary", f.unitary},
                   {"axis_a", axes.axis_a().angle()},
                   {"axis_b", axes.axis_b().angle()},
                   {"probe", f.probe},
                   {"points", f.points}};
    if (f.unitary == "pcc") params["cloner_eta"] = parse_angle(f.eta);
    write_manifest({.subcommand = "ozawa", .config = params, .outputs = {f.output}});
  }
  return kExitOk;
}

// ------------------------------------------------------------------- netsim

struct NetsimFlags {
  ConfigFlags config;
  std::string endpoint;
  std::string transcript;
  bool ablate = false;
  int timeout_ms = 30000;
};

NetsimOptions netsim_options(const NetsimFlags& f) {
  if (f.timeout_ms <= 0) throw UsageError("--timeout-ms must be positive");
  NetsimOptions o;
  o.ablate_classical = f.ablate;
  o.timeout = std::chrono::milliseconds(f.timeout_ms);
  if (!f.transcript.empty()) o.transcript_path = f.transcript;
  return o;
}

Json audit_json(const BitBudgetAudit& a) {
  return {{"trials", a.trials},
          {"classical_bits_observed", a.classical_bits_observed},
          {"quantum_fabric_messages", a.quantum_fabric_messages},
          {"conforming", a.conforming()}};
}

Json gain_json(const ChannelStats& stats) {
  if (stats.trials == 0) return nullptr;
  return to_json(information_gain(stats, std::nullopt, sampling_allowance(stats.trials)));
}

void netsim_manifest(const std::string& subcommand, const ProtocolConfig& cfg, const NetsimFlags& f,
                     std::vector<std::string> outputs) {
  if (outputs.empty()) return;
  Json config = to_json(cfg);
  config["ablate"] = f.ablate;
  write_manifest({.subcommand = subcommand, .config = config, .seed = cfg.seed,
                  .outputs = std::move(outputs)});
}

int cmd_netsim_alice(const NetsimFlags& f, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = resolve_config(f.config, 10000).cfg;
  const Endpoint at = Endpoint::parse(f.endpoint.empty() ? "127.0.0.1:9911" : f.endpoint);
  const AliceSummary s = serve_alice(cfg, at, netsim_options(f));
  const Json report = {{"role", "alice"},
                       {"completed", s.completed},
                       {"refused", s.refused},
                       {"error", s.error},
                       {"trials", s.records.size()},
                       {"classical_bits_sent", s.classical_bits_sent},
                       {"fabric_messages_sent", s.fabric_messages_sent},
                       {"unread_bytes", s.unread_bytes},
                       {"stats", s.completed ? to_json(s.stats) : Json(nullptr)},
                       {"information", s.completed ? gain_json(s.stats) : Json(nullptr)}};
  out << report.dump(2) << '\n';
  if (!f.transcript.empty()) netsim_manifest("netsim alice", cfg, f, {f.transcript});
  if (!s.completed) {
    err << "alice: " << s.error << '\n';
    return kExitTransport;
  }
  return kExitOk;
}

int cmd_netsim_bob(const NetsimFlags& f, std::ostream& out) {
  const ProtocolConfig cfg = resolve_config(f.config, 10000).cfg;
  const Endpoint to = Endpoint::parse(f.endpoint.empty() ? "127.0.0.1:9911" : f.endpoint);
  const BobResult b = serve_bob(cfg, to, netsim_options(f));
  const Json report = {{"role", "bob"},
                       {"audit", audit_json(b.audit)},
                       {"unread_bytes", b.unread_bytes},
                       {"stats", to_json(b.stats)},
                       {"information", gain_json(b.stats)}};
  out << report.dump(2) << '\n';
  if (!f.transcript.empty()) netsim_manifest("netsim bob", cfg, f, {f.transcript});
  return kExitOk;
}

int cmd_netsim_loopback(const NetsimFlags& f, std::ostream& out, std::ostream& err) {
  const ProtocolConfig cfg = resolve_config(f.config, 10000).cfg;
  const NetsimOptions options = netsim_options(f);
  const LoopbackResult r = run_loopback(cfg, options);
  if (!r.alice.completed) {
    err << "alice: " << r.alice.error << '\n';
    return kExitTransport;
  }
  Json report = {{"role", "loopback"},
                 {"ablate", f.ablate},
                 {"audit", audit_json(r.bob.audit)},
                 {"unread_bytes", {r.alice.unread_bytes, r.bob.unread_bytes}},
                 {"stats", to_json(r.alice.stats)},
                 {"information", gain_json(r.alice.stats)}};
  bool pass = r.alice.unread_bytes == 0 && r.bob.unread_bytes == 0;
  if (f.ablate) {
    const InformationGain g = information_gain(r.alice.stats, std::nullopt, 1.0);
    const double floor = independent_mi_noise_floor(cfg.trials);
    report["noise_floor"] = floor;
    report["below_noise_floor"] = g.i_a < floor && g.i_b < floor;
  } else {
    const TrialRun reference = run_trials(cfg, 1);
    const bool identical = reference.records == r.alice.records;
    report["matches_in_process_run"] = identical;
    pass = pass && identical && r.bob.audit.conforming();
  }
  report["pass"] = pass;
  out << report.dump(2) << '\n';
  if (options.transcript_path) {
    netsim_manifest("netsim loopback", cfg, f,
                    {*options.transcript_path + ".alice", *options.transcript_path + ".bob"});
  }
  return pass ? kExitOk : kExitBoundViolation;
}

void add_netsim_flags(CLI::App* app, NetsimFlags& f, const char* endpoint_flag) {
  add_config_flags(app, f.config, false);
  if (endpoint_flag != nullptr) app->add_option(endpoint_flag, f.endpoint, "host:port");
  app->add_option("--transcript", f.transcript, "JSON-lines frame dump");
  app->add_flag("--ablate", f.ablate, "Withhold the classical bit (both ends must agree)");
  app->add_option("--timeout-ms", f.timeout_ms, "Connect and receive timeout");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coarse-grained random access code simulator", "crac"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SimulateFlags sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run with exact comparison");
  add_config_flags(simulate, sim.config, true);
  simulate->add_option("--output", sim.output, "Trial CSV path (stats JSON and manifest alongside)");

  VerifyFlags ver;
  CLI::App* verify = app.add_subcommand("verify", "Bias formula, Evans-Schulman and bound checks");
  verify->add_option("--es-grid-step", ver.es_step, "Step of the xi grid");
  verify->add_option("--ic-configs", ver.ic_configs, "Random configurations to check");
  verify->add_option("--eq10-points", ver.eq10_points, "Grid points per axis of the bias check");
  verify->add_option("--seed", ver.seed, "Seed of the random configurations");
  verify->add_option("--self-test", ver.self_test, "Inject a fault: negate-xi")
      ->check(CLI::IsMember({"negate-xi"}));
  verify->add_option("--output", ver.output, "Report JSON path");

  SweepFlags sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Information gain over (eta, delta)");
  add_axis_flags(sweep_cmd, sw.axes);
  sweep_cmd->add_option("--config", sw.config_path, "Sweep manifest to re-run");
  sweep_cmd->add_option("--n-eta", sw.n_eta, "Cloner angles in [0, pi/2]");
  sweep_cmd->add_option("--n-delta", sw.n_delta, "Encoding directions");
  sweep_cmd->add_option("--delta-lo", sw.delta_lo, "First delta (default: axis_a)");
  sweep_cmd->add_option("--delta-hi", sw.delta_hi, "Last delta (default: axis_b)");
  sweep_cmd->add_option("--parallel", sw.parallel, "Worker threads");
  sweep_cmd->add_option("--output", sw.output, "CSV path (default: standard output)");

  OptimizeFlags opt;
  CLI::App* optimize = app.add_subcommand("optimize", "Cloner angle against worst-case encoding");
  add_axis_flags(optimize, opt.axes);
  optimize->add_option("--axes", opt.axes_preset, "Preset axis pair: orthogonal")
      ->check(CLI::IsMember({"orthogonal"}));
  optimize->add_option("--objective", opt.objective, "xi (xi_A^2 + xi_B^2) or mi")
      ->check(CLI::IsMember({"xi", "mi"}));
  optimize->add_flag("--json", opt.json, "Print the full result as JSON");
  optimize->add_option("--output", opt.output, "Result JSON path");

  OzawaFlags oz;
  CLI::App* ozawa = app.add_subcommand("ozawa", "Noise and disturbance over an equator grid");
  add_axis_flags(ozawa, oz.axes);
  ozawa->add_option("--unitary", oz.unitary, "swap, identity or pcc")
      ->check(CLI::IsMember({"swap", "identity", "pcc"}));
  ozawa->add_option("--eta", oz.eta, "Cloner angle for pcc");
  ozawa->add_option("--probe", oz.probe, "Probe basis state")->check(CLI::Range(0, 1));
  ozawa->add_option("--points", oz.points, "Equator grid size");
  ozawa->add_option("--output", oz.output, "Report JSON path");

  NetsimFlags na, nb, nl;
  CLI::App* netsim = app.add_subcommand("netsim", "Two-endpoint run over TCP");
  netsim->require_subcommand(1);
  CLI::App* alice = netsim->add_subcommand("alice", "Listen and encode");
  add_netsim_flags(alice, na, "--listen");
  CLI::App* bob = netsim->add_subcommand("bob", "Connect and decode");
  add_netsim_flags(bob, nb, "--connect");
  CLI::App* loopback = netsim->add_subcommand("loopback", "Both endpoints in one process");
  add_netsim_flags(loopback, nl, nullptr);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*verify) return cmd_verify(ver, out, err);
    if (*sweep_cmd) return cmd_sweep(sw, out);
    if (*optimize) return cmd_optimize(opt, out);
    if (*ozawa) return cmd_ozawa(oz, out);
    if (*alice) return cmd_netsim_alice(na, out, err);
    if (*bob) return cmd_netsim_bob(nb, out);
    if (*loopback) return cmd_netsim_loopback(nl, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "transport error: " << e.what() << '\n';
    return kExitTransport;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << '\n';
    return kExitTransport;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace crac
