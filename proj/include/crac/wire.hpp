#pragma once

// Length-prefixed JSON frames: 4-byte big-endian payload length followed by a
// UTF-8 JSON object whose "kind" field names the message.

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace crac {

/// Malformed frame, unknown message kind, or out-of-sequence message.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MessageKind { Hello, TrialStart, QuantumCollapse, ClassicalBit, Guess, Stats, Bye };

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_kind(std::string_view name);

inline constexpr std::uint32_t kMaxFrameBytes = 1u << 20;

struct WireMessage {
  MessageKind kind;
  /// Full JSON object including the "kind" tag.
  nlohmann::json payload;

  /// Builds a message and stamps the kind tag into the payload.
  static WireMessage make(MessageKind kind, nlohmann::json fields = nlohmann::json::object());
};

std::string encode_frame(const WireMessage& message);

/// Parses one payload. Throws ProtocolError on invalid JSON, a missing or
/// unknown kind, or a ClassicalBit carrying anything but {kind, trial, bit}.
WireMessage parse_payload(std::string_view json_text);

/// Incremental decoder for a byte stream.
class FrameDecoder {
 public:
  void feed(std::span<const char> bytes);
  /// Next complete message, if any. Throws ProtocolError on a bad frame.
  std::optional<WireMessage> next();
  std::size_t buffered() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

}  // namespace crac
