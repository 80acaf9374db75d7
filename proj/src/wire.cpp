#include "hm/wire.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hm::wire {

namespace {

void put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void put_i16(std::uint8_t* out, std::int16_t v) {
  const auto u = static_cast<std::uint16_t>(v);
  out[0] = static_cast<std::uint8_t>(u & 0xFF);
  out[1] = static_cast<std::uint8_t>(u >> 8);
}

std::uint32_t get_u32(const std::uint8_t* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[i]) << (8 * i);
  return v;
}

std::int16_t get_i16(const std::uint8_t* in) {
  const auto u = static_cast<std::uint16_t>(in[0] | (in[1] << 8));
  return static_cast<std::int16_t>(u);
}

std::uint8_t checksum(std::span<const std::uint8_t> bytes) {
  unsigned sum = 0;
  for (std::size_t i = 2; i < kPacketSize - 1; ++i) sum += bytes[i];
  return static_cast<std::uint8_t>(sum & 0xFF);
}

std::int16_t to_raw(double value, double lsb) {
  const double scaled = std::round(value * lsb);
  constexpr double lo = std::numeric_limits<std::int16_t>::min();
  constexpr double hi = std::numeric_limits<std::int16_t>::max();
  if (!(scaled >= lo)) return std::numeric_limits<std::int16_t>::min();
  if (scaled > hi) return std::numeric_limits<std::int16_t>::max();
  return static_cast<std::int16_t>(scaled);
}

} // namespace

void ScaleConfig::validate() const {
  const auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(acc_lsb_per_g) || !ok(gyro_lsb_per_dps)) {
    throw Error(ErrorKind::InvalidConfig, "scale factors must be finite and positive");
  }
}

PacketBytes encode_packet(const RawImuPacket& pkt) {
  PacketBytes out{};
  out[0] = kSync0;
  out[1] = kSync1;
  out[2] = pkt.seq;
  put_u32(&out[3], pkt.t_ms);
  for (std::size_t i = 0; i < 3; ++i) put_i16(&out[7 + 2 * i], pkt.gyro_raw[i]);
  for (std::size_t i = 0; i < 3; ++i) put_i16(&out[13 + 2 * i], pkt.acc_raw[i]);
  out[19] = checksum(out);
  return out;
}

std::optional<RawImuPacket> try_decode_packet(std::span<const std::uint8_t> bytes,
                                              ErrorKind* failure) {
  const auto fail = [&](ErrorKind kind) -> std::optional<RawImuPacket> {
    if (failure) *failure = kind;
    return std::nullopt;
  };
  if (bytes.size() != kPacketSize) return fail(ErrorKind::BadLength);
  if (bytes[0] != kSync0 || bytes[1] != kSync1) return fail(ErrorKind::BadSync);
  if (bytes[19] != checksum(bytes)) return fail(ErrorKind::BadChecksum);

  RawImuPacket pkt;
  pkt.seq = bytes[2];
  pkt.t_ms = get_u32(&bytes[3]);
  for (std::size_t i = 0; i < 3; ++i) pkt.gyro_raw[i] = get_i16(&bytes[7 + 2 * i]);
  for (std::size_t i = 0; i < 3; ++i) pkt.acc_raw[i] = get_i16(&bytes[13 + 2 * i]);
  return pkt;
}

RawImuPacket decode_packet(std::span<const std::uint8_t> bytes) {
  ErrorKind failure = ErrorKind::BadLength;
  auto pkt = try_decode_packet(bytes, &failure);
  if (!pkt) {
    throw Error(failure, "cannot decode " + std::to_string(bytes.size()) + "-byte packet");
  }
  return *pkt;
}

void StreamFramer::push(std::span<const std::uint8_t> chunk) {
  compact();
  buffer_.insert(buffer_.end(), chunk.begin(), chunk.end());
}

void StreamFramer::compact() {
  if (head_ == 0) return;
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(head_));
  head_ = 0;
}

std::optional<RawImuPacket> StreamFramer::next() {
  while (buffer_.size() - head_ >= kPacketSize) {
    const std::span<const std::uint8_t> window(buffer_.data() + head_, kPacketSize);
    if (window[0] != kSync0 || window[1] != kSync1) {
      ++head_;
      ++stats_.skipped_bytes;
      continue;
    }
    auto pkt = try_decode_packet(window);
    if (!pkt) {
      ++stats_.rejected_candidates;
      ++head_;
      ++stats_.skipped_bytes;
      continue;
    }
    head_ += kPacketSize;
    ++stats_.packets;
    if (last_seq_) {
      const auto expected = static_cast<std::uint8_t>(*last_seq_ + 1);
      stats_.sequence_gaps += static_cast<std::uint8_t>(pkt->seq - expected);
    }
    last_seq_ = pkt->seq;
    return pkt;
  }
  return std::nullopt;
}

FrameResult frame_stream(std::span<const std::uint8_t> bytes) {
  StreamFramer framer;
  framer.push(bytes);
  FrameResult result;
  while (auto pkt = framer.next()) result.packets.push_back(*pkt);
  result.stats = framer.stats();
  // Trailing bytes too short to hold a packet can never decode.
  result.stats.skipped_bytes += framer.buffered();
  return result;
}

ImuSample raw_to_physical(const RawImuPacket& pkt, const ScaleConfig& scale) {
  ImuSample s;
  s.t_ms = pkt.t_ms;
  s.acc = {pkt.acc_raw[0] / scale.acc_lsb_per_g, pkt.acc_raw[1] / scale.acc_lsb_per_g,
           pkt.acc_raw[2] / scale.acc_lsb_per_g};
  s.gyro = {pkt.gyro_raw[0] / scale.gyro_lsb_per_dps, pkt.gyro_raw[1] / scale.gyro_lsb_per_dps,
            pkt.gyro_raw[2] / scale.gyro_lsb_per_dps};
  return s;
}

RawImuPacket physical_to_raw(const ImuSample& sample, std::uint8_t seq,
                             const ScaleConfig& scale) {
  RawImuPacket pkt;
  pkt.seq = seq;
  pkt.t_ms = sample.t_ms;
  pkt.gyro_raw = {to_raw(sample.gyro.x, scale.gyro_lsb_per_dps),
                  to_raw(sample.gyro.y, scale.gyro_lsb_per_dps),
                  to_raw(sample.gyro.z, scale.gyro_lsb_per_dps)};
  pkt.acc_raw = {to_raw(sample.acc.x, scale.acc_lsb_per_g), to_raw(sample.acc.y, scale.acc_lsb_per_g),
                 to_raw(sample.acc.z, scale.acc_lsb_per_g)};
  return pkt;
}

} // namespace hm::wire
