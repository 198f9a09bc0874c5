#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "crac/analysis.hpp"
#include "crac/channel_stats.hpp"
#include "crac/infotheory.hpp"
#include "crac/protocol.hpp"

namespace crac {

using Json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Parses a radian literal: a decimal number or a multiple/fraction of pi
/// ("pi", "-pi/2", "3pi/4", "3*pi/4", "pi*0.5"). Throws ContractViolation.
double parse_angle(std::string_view text);

/// %.17g: round-trips every double.
std::string format_exact(double value);

/// ProtocolConfig <-> JSON. Keys: axis_a, axis_b, cloner_eta, phi_mode
/// ("fixed" | "uniform"), phi (fixed only), bits_prior, trials, seed. Angles
/// may be numbers or radian literals.
Json to_json(const ProtocolConfig& cfg);
ProtocolConfig config_from_json(const Json& j);

Json to_json(const ChannelStats& stats);
Json to_json(const JointTable& table);
JointTable joint_table_from_json(const Json& j);
Json to_json(const InformationGain& gain);
Json to_json(const BiasParameters& xi);

/// FNV-1a 64 over the canonical JSON of the config plus `extra`, as hex.
std::string config_hash(const ProtocolConfig& cfg, std::string_view extra = {});

/// Record written next to every output file.
struct RunManifest {
  std::string subcommand;
  Json config;
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  std::vector<std::string> outputs;

  Json to_json() const;
};

/// Writes `<output>.manifest.json` for the first output and returns its path.
std::string write_manifest(const RunManifest& manifest);

}  // namespace crac
