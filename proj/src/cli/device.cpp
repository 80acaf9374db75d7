#include "hm/device.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <thread>

#include "hm/error.hpp"

namespace hm::device {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorKind::IoFailure, what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    throw Error(ErrorKind::IoFailure, "cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  ::freeaddrinfo(res);
  addr.sin_port = htons(port);
  return addr;
}

} // namespace

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() noexcept {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::send_all(std::span<const std::uint8_t> bytes) const {
  while (!bytes.empty()) {
    const auto n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("send");
    }
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
}

std::size_t Socket::receive(std::span<std::uint8_t> buffer) const {
  while (true) {
    const auto n = ::recv(fd_, buffer.data(), buffer.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno != EINTR) fail("recv");
  }
}

Listener Listener::open(const std::string& host, std::uint16_t port) {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) fail("socket");
  const int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  auto addr = resolve(host, port);
  if (::bind(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    fail("bind " + host + ":" + std::to_string(port));
  }
  if (::listen(s.fd(), 1) != 0) fail("listen");
  socklen_t len = sizeof(addr);
  if (::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) fail("getsockname");

  Listener l;
  l.socket_ = std::move(s);
  l.port_ = ntohs(addr.sin_port);
  return l;
}

Socket Listener::accept() const {
  while (true) {
    const int fd = ::accept(socket_.fd(), nullptr, nullptr);
    if (fd >= 0) return Socket(fd);
    if (errno != EINTR) fail("accept");
  }
}

Socket connect_to(const std::string& host, std::uint16_t port) {
  Socket s(::socket(AF_INET, SOCK_STREAM, 0));
  if (!s.valid()) fail("socket");
  const auto addr = resolve(host, port);
  if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    fail("connect " + host + ":" + std::to_string(port));
  }
  return s;
}

std::size_t stream_session(const Socket& client, const Session& session, const StreamOptions& options) {
  options.scale.validate();
  const auto period = std::chrono::milliseconds(options.period_ms);
  auto next_send = std::chrono::steady_clock::now();
  std::size_t sent = 0;
  for (const auto& sample : session.samples) {
    if (options.realtime && sent > 0) {
      next_send += period;
      std::this_thread::sleep_until(next_send);
    }
    const auto pkt = wire::physical_to_raw(sample, static_cast<std::uint8_t>(sent), options.scale);
    const auto bytes = wire::encode_packet(pkt);
    client.send_all(bytes);
    ++sent;
  }
  return sent;
}

CaptureResult capture(const Socket& connection, std::string participant_id,
                      const wire::ScaleConfig& scale) {
  scale.validate();
  CaptureResult result;
  result.session.participant_id = std::move(participant_id);
  wire::StreamFramer framer;
  std::array<std::uint8_t, 4096> buffer{};
  while (true) {
    const auto n = connection.receive(buffer);
    if (n == 0) break;
    framer.push(std::span<const std::uint8_t>(buffer.data(), n));
    while (auto pkt = framer.next()) result.session.samples.push_back(wire::raw_to_physical(*pkt, scale));
  }
  result.stats = framer.stats();
  result.stats.skipped_bytes += framer.buffered();
  return result;
}

} // namespace hm::device
