#pragma once

// Two-endpoint run of the protocol over TCP.
//
// Alice listens, Bob connects. Per trial Alice sends TrialStart, a
// QuantumCollapse carrying the amplitudes of Bob's half of the singlet (the
// simulated quantum fabric), and a ClassicalBit carrying beta; Bob answers
// with a Guess. Only ClassicalBit counts against the one-bit budget.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crac/channel_stats.hpp"
#include "crac/protocol.hpp"
#include "crac/socket.hpp"
#include "crac/wire.hpp"

namespace crac {

/// Bob's connection was refused at the handshake (config mismatch).
class HandshakeRefused : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

struct NetsimOptions {
  /// Alice withholds beta; Bob corrects with beta = 0. Both ends must agree.
  bool ablate_classical = false;
  /// JSON-lines dump of every frame sent or received.
  std::optional<std::string> transcript_path;
  std::chrono::milliseconds timeout{30000};
};

struct BitBudgetAudit {
  std::uint64_t trials = 0;
  std::uint64_t classical_bits_observed = 0;
  std::uint64_t quantum_fabric_messages = 0;

  /// One beta and one fabric message per trial.
  bool conforming() const {
    return classical_bits_observed == trials && quantum_fabric_messages == trials;
  }
};

struct AliceSummary {
  bool completed = false;
  bool refused = false;
  std::string error;
  std::vector<TrialRecord> records;
  ChannelStats stats;
  std::uint64_t classical_bits_sent = 0;
  std::uint64_t fabric_messages_sent = 0;
  /// Bytes left unread after the closing handshake.
  std::size_t unread_bytes = 0;
};

struct BobResult {
  ChannelStats stats;
  BitBudgetAudit audit;
  std::size_t unread_bytes = 0;
};

/// Serves one Bob on an already-bound listener. Transport loss and protocol
/// violations are reported in the summary (completed = false) rather than
/// thrown.
AliceSummary serve_alice(const ProtocolConfig& cfg, TcpListener& listener,
                         const NetsimOptions& options = {});
AliceSummary serve_alice(const ProtocolConfig& cfg, const Endpoint& listen_at,
                         const NetsimOptions& options = {});

/// Connects to Alice and decodes every trial. Throws HandshakeRefused,
/// ProtocolError or TransportError.
BobResult serve_bob(const ProtocolConfig& cfg, const Endpoint& alice,
                    const NetsimOptions& options = {});

/// Alice and Bob on two threads over the loopback interface.
struct LoopbackResult {
  AliceSummary alice;
  BobResult bob;
};

LoopbackResult run_loopback(const ProtocolConfig& cfg, const NetsimOptions& options = {});

/// Upper edge of the sampling noise of the empirical mutual information of two
/// independent bits over n samples, in bits: mean plus four standard
/// deviations of chi^2_1 / (2 n ln 2).
double independent_mi_noise_floor(std::uint64_t n);

}  // namespace crac
