#pragma once

// TCP emulation of the earable: a server that replays a session as a stream
// of wire packets, and a capture client that reframes it into a session.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "hm/session.hpp"
#include "hm/wire.hpp"

namespace hm::device {

class Socket {
public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept;

  // Throws IoFailure.
  void send_all(std::span<const std::uint8_t> bytes) const;
  // Bytes read, 0 at end of stream. Throws IoFailure.
  std::size_t receive(std::span<std::uint8_t> buffer) const;

private:
  int fd_ = -1;
};

class Listener {
public:
  // Port 0 binds an ephemeral port; see port().
  static Listener open(const std::string& host, std::uint16_t port);

  std::uint16_t port() const noexcept { return port_; }
  Socket accept() const;

private:
  Socket socket_;
  std::uint16_t port_ = 0;
};

Socket connect_to(const std::string& host, std::uint16_t port);

struct StreamOptions {
  std::uint32_t period_ms = 1000;
  bool realtime = false; // sleep one period between packets; otherwise send as fast as possible
  wire::ScaleConfig scale;
};

// Streams every sample as a 20-byte packet; returns the number sent.
std::size_t stream_session(const Socket& client, const Session& session, const StreamOptions& options);

struct CaptureResult {
  Session session;
  wire::FrameStats stats;
};

// Reads until the peer closes the connection.
CaptureResult capture(const Socket& connection, std::string participant_id,
                      const wire::ScaleConfig& scale = {});

} // namespace hm::device
