#pragma once

// Binary framing of the emulated earable feed.
//
// Packet layout (20 bytes):
//   [0..2)   sync 0x55 0xAA
//   [2]      sequence counter, wraps mod 256
//   [3..7)   t_ms, little-endian u32
//   [7..19)  gyro x,y,z then acc x,y,z, little-endian i16
//   [19]     checksum: sum of bytes [2..19) mod 256

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hm/error.hpp"
#include "hm/imu.hpp"

namespace hm::wire {

inline constexpr std::size_t kPacketSize = 20;
inline constexpr std::uint8_t kSync0 = 0x55;
inline constexpr std::uint8_t kSync1 = 0xAA;

using PacketBytes = std::array<std::uint8_t, kPacketSize>;

struct RawImuPacket {
  std::uint8_t seq = 0;
  std::uint32_t t_ms = 0;
  std::array<std::int16_t, 3> gyro_raw{};
  std::array<std::int16_t, 3> acc_raw{};

  friend bool operator==(const RawImuPacket&, const RawImuPacket&) = default;
};

// Full-scale settings of the emulated IMU (+-4 g, +-500 dps by default).
struct ScaleConfig {
  double acc_lsb_per_g = 8192.0;
  double gyro_lsb_per_dps = 65.5;

  // Throws InvalidConfig unless both factors are finite and > 0.
  void validate() const;
};

PacketBytes encode_packet(const RawImuPacket& pkt);

// Throws BadLength, BadSync or BadChecksum.
RawImuPacket decode_packet(std::span<const std::uint8_t> bytes);

// Non-throwing variant; `failure` receives the reason when nullopt is returned.
std::optional<RawImuPacket> try_decode_packet(std::span<const std::uint8_t> bytes,
                                              ErrorKind* failure = nullptr);

struct FrameStats {
  std::size_t packets = 0;
  std::size_t skipped_bytes = 0;
  std::size_t rejected_candidates = 0; // sync found but checksum failed
  std::size_t sequence_gaps = 0;       // packets missing according to seq
};

// Incremental resynchronizing framer for a byte stream that arrives in chunks.
class StreamFramer {
public:
  void push(std::span<const std::uint8_t> chunk);

  // Next cleanly decoded packet, or nullopt when more bytes are needed.
  std::optional<RawImuPacket> next();

  const FrameStats& stats() const noexcept { return stats_; }
  std::size_t buffered() const noexcept { return buffer_.size() - head_; }

private:
  void compact();

  std::vector<std::uint8_t> buffer_;
  std::size_t head_ = 0;
  std::optional<std::uint8_t> last_seq_;
  FrameStats stats_;
};

struct FrameResult {
  std::vector<RawImuPacket> packets;
  FrameStats stats;
};

FrameResult frame_stream(std::span<const std::uint8_t> bytes);

ImuSample raw_to_physical(const RawImuPacket& pkt, const ScaleConfig& scale = {});

// Nearest raw count per axis, saturated to the i16 range. Exact inverse of
// raw_to_physical for values that lie on the raw grid.
RawImuPacket physical_to_raw(const ImuSample& sample, std::uint8_t seq,
                             const ScaleConfig& scale = {});

} // namespace hm::wire
