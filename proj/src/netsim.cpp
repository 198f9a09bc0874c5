#include "crac/netsim.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>

#include "crac/config_io.hpp"

namespace crac {
namespace {

using nlohmann::json;

std::string handshake_extra(const NetsimOptions& options) {
  return options.ablate_classical ? "ablate" : "";
}

/// Framed message channel over one stream, with optional transcript.
class Channel {
 public:
  Channel(TcpStream stream, const NetsimOptions& options) : stream_(std::move(stream)) {
    if (options.transcript_path) {
      transcript_.open(*options.transcript_path);
      if (!transcript_) throw TransportError("cannot open transcript " + *options.transcript_path);
    }
  }

  void send(const WireMessage& msg) {
    stream_.send_all(encode_frame(msg));
    log(msg);
  }

  WireMessage receive() {
    for (;;) {
      if (auto msg = decoder_.next()) {
        log(*msg);
        return std::move(*msg);
      }
      std::array<char, 4096> buf{};
      const std::size_t n = stream_.receive(buf);
      if (n == 0) throw TransportError("connection closed by peer");
      decoder_.feed(std::span<const char>(buf.data(), n));
    }
  }

  WireMessage expect(MessageKind kind) {
    WireMessage msg = receive();
    if (msg.kind != kind) {
      throw ProtocolError("expected " + std::string(to_string(kind)) + ", got " +
                          std::string(to_string(msg.kind)));
    }
    return msg;
  }

  /// Half-closes and drains to EOF; returns how many bytes were still pending.
  std::size_t close_and_count_unread() {
    stream_.shutdown_write();
    std::size_t unread = decoder_.buffered();
    std::array<char, 4096> buf{};
    for (;;) {
      const std::size_t n = stream_.receive(buf);
      if (n == 0) break;
      unread += n;
    }
    return unread;
  }

 private:
  void log(const WireMessage& msg) {
    if (transcript_.is_open()) transcript_ << msg.payload.dump() << '\n';
  }

  TcpStream stream_;
  FrameDecoder decoder_;
  std::ofstream transcript_;
};

json qubit_to_json(const QubitState& q) {
  json out = json::array();
  for (int i = 0; i < 2; ++i) {
    out.push_back(format_exact(q[i].real()));
    out.push_back(format_exact(q[i].imag()));
  }
  return out;
}

QubitState qubit_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ProtocolError("qubit must be four decimal strings");
  std::array<Complex, 2> amps;
  for (std::size_t i = 0; i < 2; ++i) {
    const double re = std::stod(j[2 * i].get<std::string>());
    const double im = std::stod(j[2 * i + 1].get<std::string>());
    amps[i] = {re, im};
  }
  try {
    return QubitState::from_amplitudes(amps);
  } catch (const ContractViolation& e) {
    throw ProtocolError(std::string("invalid qubit: ") + e.what());
  }
}

std::uint64_t expect_trial(const WireMessage& msg, std::uint64_t trial) {
  const auto t = msg.payload.value("trial", std::uint64_t{~0ULL});
  if (t != trial) throw ProtocolError("trial index out of sequence");
  return t;
}

int outcome_field(const json& j, const char* key) {
  const int v = j.at(key).get<int>();
  if (v != 1 && v != -1) throw ProtocolError(std::string(key) + " must be +1 or -1");
  return v;
}

void run_alice_session(const ProtocolConfig& cfg, Channel& ch, const NetsimOptions& options,
                       AliceSummary& summary) {
  const WireMessage hello = ch.expect(MessageKind::Hello);
  const std::string expected = config_hash(cfg, handshake_extra(options));
  if (hello.payload.value("config_hash", std::string{}) != expected) {
    summary.refused = true;
    ch.send(WireMessage::make(MessageKind::Hello, {{"role", "alice"},
                                                   {"accepted", false},
                                                   {"reason", "config hash mismatch"}}));
    summary.error = "refused: config hash mismatch";
    return;
  }
  ch.send(WireMessage::make(MessageKind::Hello, {{"role", "alice"},
                                                 {"accepted", true},
                                                 {"config_hash", expected},
                                                 {"trials", cfg.trials},
                                                 {"version", std::string(kToolVersion)}}));

  RandomStream rng = derive_stream(cfg.seed, 0, StreamRole::Alice);
  summary.records.reserve(cfg.trials);
  for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
    const AliceRound round = alice_round(cfg, rng);
    ch.send(WireMessage::make(MessageKind::TrialStart, {{"trial", trial}}));
    ch.send(WireMessage::make(MessageKind::QuantumCollapse,
                              {{"trial", trial}, {"qubit", qubit_to_json(round.encoding.bob_state)}}));
    ++summary.fabric_messages_sent;
    if (!options.ablate_classical) {
      ch.send(WireMessage::make(MessageKind::ClassicalBit,
                                {{"trial", trial}, {"bit", round.encoding.beta}}));
      ++summary.classical_bits_sent;
    }
    const WireMessage g = ch.expect(MessageKind::Guess);
    expect_trial(g, trial);
    const Outcomes o{outcome_field(g.payload, "o_a"), outcome_field(g.payload, "o_b")};
    const int known_beta = options.ablate_classical ? 0 : round.encoding.beta;
    TrialRecord record = make_record(trial, round, o, known_beta);
    if (g.payload.at("g_a").get<int>() != record.guess_a ||
        g.payload.at("g_b").get<int>() != record.guess_b) {
      throw ProtocolError("guess inconsistent with reported outcomes");
    }
    summary.records.push_back(record);
  }

  summary.stats = stats_from_records(summary.records);
  summary.stats.classical_bits_used = summary.classical_bits_sent;
  json stats = to_json(summary.stats);
  ch.send(WireMessage::make(MessageKind::Stats, std::move(stats)));
  ch.expect(MessageKind::Bye);
  ch.send(WireMessage::make(MessageKind::Bye));
  summary.unread_bytes = ch.close_and_count_unread();
  summary.completed = true;
}

}  // namespace

AliceSummary serve_alice(const ProtocolConfig& cfg, TcpListener& listener,
                         const NetsimOptions& options) {
  cfg.validate();
  if (cfg.trials == 0) throw ContractViolation("trials must be positive");
  AliceSummary summary;
  try {
    Channel ch(listener.accept(options.timeout), options);
    run_alice_session(cfg, ch, options, summary);
  } catch (const ProtocolError& e) {
    summary.error = std::string("protocol error: ") + e.what();
  } catch (const TransportError& e) {
    summary.error = std::string("aborted: ") + e.what();
  } catch (const nlohmann::json::exception& e) {
    summary.error = std::string("protocol error: ") + e.what();
  }
  return summary;
}

AliceSummary serve_alice(const ProtocolConfig& cfg, const Endpoint& listen_at,
                         const NetsimOptions& options) {
  TcpListener listener(listen_at);
  return serve_alice(cfg, listener, options);
}

BobResult serve_bob(const ProtocolConfig& cfg, const Endpoint& alice,
                    const NetsimOptions& options) {
  cfg.validate();
  Channel ch(TcpStream::connect(alice, options.timeout), options);
  const std::string hash = config_hash(cfg, handshake_extra(options));
  ch.send(WireMessage::make(MessageKind::Hello, {{"role", "bob"},
                                                 {"config_hash", hash},
                                                 {"version", std::string(kToolVersion)}}));
  const WireMessage reply = ch.expect(MessageKind::Hello);
  if (!reply.payload.value("accepted", false)) {
    throw HandshakeRefused("Alice refused the session: " +
                           reply.payload.value("reason", std::string("unspecified")));
  }

  try {
    const Apparatus apparatus = Apparatus::standard(cfg.cloner_eta);
    RandomStream rng = derive_stream(cfg.seed, 0, StreamRole::Bob);
    BobResult result;
    for (;;) {
      WireMessage msg = ch.receive();
      if (msg.kind == MessageKind::Stats) {
        result.stats.joint_a = joint_table_from_json(msg.payload.at("joint_a"));
        result.stats.joint_b = joint_table_from_json(msg.payload.at("joint_b"));
        result.stats.outcome_joint_a = joint_table_from_json(msg.payload.at("outcome_joint_a"));
        result.stats.outcome_joint_b = joint_table_from_json(msg.payload.at("outcome_joint_b"));
        result.stats.trials = msg.payload.at("trials").get<std::uint64_t>();
        // Bob reports what he observed, not what Alice claims.
        result.stats.classical_bits_used = result.audit.classical_bits_observed;
        break;
      }
      if (msg.kind != MessageKind::TrialStart) {
        throw ProtocolError("unexpected " + std::string(to_string(msg.kind)));
      }
      const std::uint64_t trial = result.audit.trials;
      expect_trial(msg, trial);
      const WireMessage fabric = ch.expect(MessageKind::QuantumCollapse);
      expect_trial(fabric, trial);
      ++result.audit.quantum_fabric_messages;
      const QubitState qubit = qubit_from_json(fabric.payload.at("qubit"));

      int beta = 0;
      if (!options.ablate_classical) {
        const WireMessage bit = ch.expect(MessageKind::ClassicalBit);
        expect_trial(bit, trial);
        beta = bit.payload.at("bit").get<int>();
        ++result.audit.classical_bits_observed;
      }
      const Outcomes o = decode(qubit, cfg.axes, apparatus, rng);
      ch.send(WireMessage::make(MessageKind::Guess, {{"trial", trial},
                                                     {"o_a", o.a},
                                                     {"o_b", o.b},
                                                     {"g_a", guess(o.a, beta)},
                                                     {"g_b", guess(o.b, beta)}}));
      ++result.audit.trials;
    }
    ch.send(WireMessage::make(MessageKind::Bye));
    ch.expect(MessageKind::Bye);
    result.unread_bytes = ch.close_and_count_unread();
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed payload: ") + e.what());
  }
}

LoopbackResult run_loopback(const ProtocolConfig& cfg, const NetsimOptions& options) {
  TcpListener listener(Endpoint{"127.0.0.1", 0});
  const Endpoint address{"127.0.0.1", listener.port()};
  NetsimOptions alice_options = options;
  NetsimOptions bob_options = options;
  if (options.transcript_path) {
    alice_options.transcript_path = *options.transcript_path + ".alice";
    bob_options.transcript_path = *options.transcript_path + ".bob";
  }
  auto alice = std::async(std::launch::async,
                          [&] { return serve_alice(cfg, listener, alice_options); });
  LoopbackResult out;
  try {
    out.bob = serve_bob(cfg, address, bob_options);
  } catch (...) {
    alice.wait();
    throw;
  }
  out.alice = alice.get();
  return out;
}

double independent_mi_noise_floor(std::uint64_t n) {
  if (n == 0) throw ContractViolation("sample count must be positive");
  return (1.0 + 4.0 * std::numbers::sqrt2) / (2.0 * static_cast<double>(n) * std::numbers::ln2);
}

}  // namespace crac
