#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crac {

/// Connection refused, lost, or timed out.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port"; throws ContractViolation on a malformed address.
  static Endpoint parse(std::string_view text);
  std::string to_string() const;
};

/// Owning TCP stream socket.
class TcpStream {
 public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;
  ~TcpStream();

  static TcpStream connect(const Endpoint& endpoint, std::chrono::milliseconds timeout);

  void set_timeout(std::chrono::milliseconds timeout);
  void send_all(std::string_view bytes);
  /// Bytes read, 0 on orderly shutdown by the peer.
  std::size_t receive(std::span<char> buffer);
  void shutdown_write();
  bool valid() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  /// Binds and listens; port 0 picks an ephemeral port.
  explicit TcpListener(const Endpoint& endpoint);
  TcpListener(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener();

  std::uint16_t port() const { return port_; }
  TcpStream accept(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace crac
