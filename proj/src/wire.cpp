#include "crac/wire.hpp"

#include <array>

namespace crac {
namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 7> kKindNames{{
    {MessageKind::Hello, "Hello"},
    {MessageKind::TrialStart, "TrialStart"},
    {MessageKind::QuantumCollapse, "QuantumCollapse"},
    {MessageKind::ClassicalBit, "ClassicalBit"},
    {MessageKind::Guess, "Guess"},
    {MessageKind::Stats, "Stats"},
    {MessageKind::Bye, "Bye"},
}};

void check_classical_bit(const nlohmann::json& j) {
  if (j.size() != 3 || !j.contains("trial") || !j.contains("bit")) {
    throw ProtocolError("ClassicalBit must carry exactly {kind, trial, bit}");
  }
  const auto& bit = j.at("bit");
  if (!bit.is_number_integer() || (bit.get<int>() != 0 && bit.get<int>() != 1)) {
    throw ProtocolError("ClassicalBit payload must be a single bit");
  }
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<MessageKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

WireMessage WireMessage::make(MessageKind kind, nlohmann::json fields) {
  fields["kind"] = std::string(to_string(kind));
  return {kind, std::move(fields)};
}

std::string encode_frame(const WireMessage& message) {
  const std::string body = message.payload.dump();
  if (body.size() > kMaxFrameBytes) throw ProtocolError("frame too large");
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string frame;
  frame.reserve(4 + body.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xff));
  frame.push_back(static_cast<char>((n >> 16) & 0xff));
  frame.push_back(static_cast<char>((n >> 8) & 0xff));
  frame.push_back(static_cast<char>(n & 0xff));
  frame += body;
  return frame;
}

WireMessage parse_payload(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw ProtocolError("frame payload is not a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ProtocolError("frame payload has no kind tag");
  }
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  if (!kind) throw ProtocolError("unknown message kind: " + j.at("kind").get<std::string>());
  if (*kind == MessageKind::ClassicalBit) check_classical_bit(j);
  return {*kind, std::move(j)};
}

void FrameDecoder::feed(std::span<const char> bytes) { buffer_.append(bytes.data(), bytes.size()); }

std::optional<WireMessage> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[static_cast<std::size_t>(i)]);
  if (n > kMaxFrameBytes) throw ProtocolError("frame length exceeds limit");
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  WireMessage msg = parse_payload(std::string_view(buffer_).substr(4, n));
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  return msg;
}

}  // namespace crac
