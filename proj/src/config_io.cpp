#include "crac/config_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace crac {
namespace {

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ContractViolation("not a radian literal: '" + std::string(whole) + "'");
  }
  return v;
}

double angle_value(const Json& j, const char* key) {
  if (!j.contains(key)) throw ContractViolation(std::string("config is missing '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  throw ContractViolation(std::string("config field '") + key + "' must be an angle");
}

}  // namespace

double parse_angle(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_number(s, text);

  // [sign][coef][*]pi[*factor][/divisor]
  std::string_view head(s.data(), at);
  std::string_view tail(s.data() + at + 2, s.size() - at - 2);
  double sign = 1.0;
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    if (head.front() == '-') sign = -1.0;
    head.remove_prefix(1);
  }
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  double value = sign * (head.empty() ? 1.0 : parse_number(head, text)) * std::numbers::pi;
  if (!tail.empty() && tail.front() == '*') {
    tail.remove_prefix(1);
    const auto slash = tail.find('/');
    value *= parse_number(tail.substr(0, slash), text);
    tail = slash == std::string_view::npos ? std::string_view{} : tail.substr(slash);
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw ContractViolation("not a radian literal: '" + std::string(text) + "'");
    const double div = parse_number(tail.substr(1), text);
    if (div == 0.0) throw ContractViolation("division by zero in angle literal");
    value /= div;
  }
  return value;
}

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json to_json(const ProtocolConfig& cfg) {
  Json j;
  j["axis_a"] = cfg.axes.axis_a().angle();
  j["axis_b"] = cfg.axes.axis_b().angle();
  j["cloner_eta"] = cfg.cloner_eta.value();
  if (const auto* fixed = std::get_if<FixedPhi>(&cfg.phi_mode)) {
    j["phi_mode"] = "fixed";
    j["phi"] = fixed->anchor.angle();
  } else {
    j["phi_mode"] = "uniform";
  }
  j["bits_prior"] = cfg.bits_prior;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  return j;
}

ProtocolConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ContractViolation("config must be a JSON object");
  ProtocolConfig cfg{
      .axes = QuadrantPartition(EquatorDirection(angle_value(j, "axis_a")),
                                EquatorDirection(angle_value(j, "axis_b"))),
      .cloner_eta = ClonerAngle(angle_value(j, "cloner_eta"))};
  const std::string mode = j.value("phi_mode", j.contains("phi") ? "fixed" : "uniform");
  if (mode == "fixed") {
    cfg.phi_mode = FixedPhi{EquatorDirection(angle_value(j, "phi"))};
  } else if (mode == "uniform") {
    cfg.phi_mode = UniformQuadrant{};
  } else {
    throw ContractViolation("phi_mode must be 'fixed' or 'uniform'");
  }
  if (j.contains("bits_prior")) {
    const Json& p = j.at("bits_prior");
    if (!p.is_array() || p.size() != 4) throw ContractViolation("bits_prior needs 4 entries");
    for (std::size_t i = 0; i < 4; ++i) cfg.bits_prior[i] = p[i].get<double>();
  }
  cfg.trials = j.value("trials", std::uint64_t{1});
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.validate();
  return cfg;
}

Json to_json(const JointTable& table) {
  return Json::array({Json::array({table[0][0], table[0][1]}),
                      Json::array({table[1][0], table[1][1]})});
}

JointTable joint_table_from_json(const Json& j) {
  JointTable t{};
  if (!j.is_array() || j.size() != 2) throw ContractViolation("joint table must be 2x2");
  for (std::size_t i = 0; i < 2; ++i) {
    if (!j[i].is_array() || j[i].size() != 2) throw ContractViolation("joint table must be 2x2");
    for (std::size_t k = 0; k < 2; ++k) t[i][k] = j[i][k].get<double>();
  }
  return t;
}

Json to_json(const ChannelStats& s) {
  return {{"joint_a", to_json(s.joint_a)},
          {"joint_b", to_json(s.joint_b)},
          {"outcome_joint_a", to_json(s.outcome_joint_a)},
          {"outcome_joint_b", to_json(s.outcome_joint_b)},
          {"trials", s.trials},
          {"classical_bits_used", s.classical_bits_used},
          {"exact", s.exact}};
}

Json to_json(const InformationGain& g) {
  return {{"i_a", g.i_a},
          {"i_b", g.i_b},
          {"total", g.total},
          {"i_a_outcome", g.i_a_outcome},
          {"i_b_outcome", g.i_b_outcome},
          {"exceeds_one", g.exceeds_one},
          {"exceeds_bias_bound", g.exceeds_bias_bound},
          {"routes_diverge", g.routes_diverge}};
}

Json to_json(const BiasParameters& xi) {
  return {{"xi_a", xi.xi_a}, {"xi_b", xi.xi_b}, {"xi_sq_sum", xi.xi_sq_sum()}};
}

std::string config_hash(const ProtocolConfig& cfg, std::string_view extra) {
  const std::string canonical = to_json(cfg).dump() + "|" + std::string(extra);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json RunManifest::to_json() const {
  return {{"subcommand", subcommand}, {"config", config},   {"seed", seed},
          {"tool_version", tool_version}, {"outputs", outputs}};
}

std::string write_manifest(const RunManifest& manifest) {
  if (manifest.outputs.empty()) throw ContractViolation("manifest needs an output path");
  const std::string path = manifest.outputs.front() + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << manifest.to_json().dump(2) << '\n';
  return path;
}

}  // namespace crac
