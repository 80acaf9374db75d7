#pragma once

// Shared fixtures for the unit and acceptance binaries: random generators,
// scratch directories, and brute-force oracles that deliberately avoid the
// library code they check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hm/imu.hpp"
#include "hm/wire.hpp"

namespace hm::test {

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hm-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline wire::RawImuPacket random_packet(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> i16(-32768, 32767);
  std::uniform_int_distribution<int> u8(0, 255);
  std::uniform_int_distribution<std::uint32_t> u32;
  wire::RawImuPacket p;
  p.seq = static_cast<std::uint8_t>(u8(rng));
  p.t_ms = u32(rng);
  for (auto& g : p.gyro_raw) g = static_cast<std::int16_t>(i16(rng));
  for (auto& a : p.acc_raw) a = static_cast<std::int16_t>(i16(rng));
  return p;
}

// Samples with non-decreasing timestamps and arbitrary finite doubles.
inline std::vector<ImuSample> random_samples(std::mt19937_64& rng, std::size_t n,
                                             std::uint32_t max_step = 1500) {
  std::normal_distribution<double> acc(0.0, 1.5);
  std::normal_distribution<double> gyro(0.0, 40.0);
  std::uniform_int_distribution<std::uint32_t> step(0, max_step);
  std::vector<ImuSample> out(n);
  std::uint32_t t = 0;
  for (auto& s : out) {
    t += step(rng);
    s.t_ms = t;
    s.acc = {acc(rng), acc(rng), acc(rng)};
    s.gyro = {gyro(rng), gyro(rng), gyro(rng)};
  }
  return out;
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return got == want ? 0.0 : std::abs(got - want) / scale;
}

namespace oracle {

// Layout written out field by field, independent of encode_packet.
inline std::vector<std::uint8_t> packet_bytes(const wire::RawImuPacket& p) {
  std::vector<std::uint8_t> b{0x55, 0xAA, p.seq};
  for (int shift = 0; shift < 32; shift += 8) b.push_back(static_cast<std::uint8_t>(p.t_ms >> shift));
  auto put16 = [&](std::int16_t v) {
    const auto u = static_cast<std::uint16_t>(v);
    b.push_back(static_cast<std::uint8_t>(u & 0xFF));
    b.push_back(static_cast<std::uint8_t>(u >> 8));
  };
  for (auto v : p.gyro_raw) put16(v);
  for (auto v : p.acc_raw) put16(v);
  unsigned sum = 0;
  for (std::size_t i = 2; i < b.size(); ++i) sum += b[i];
  b.push_back(static_cast<std::uint8_t>(sum % 256));
  return b;
}

inline long double norm(const Vec3& v) {
  const long double x = v.x, y = v.y, z = v.z;
  return std::sqrt(x * x + y * y + z * z);
}

struct Moments {
  long double mean = 0;
  long double std = 0;
};

// Two-pass moments in extended precision.
inline Moments moments(const std::vector<long double>& xs, bool sample = false) {
  long double sum = 0;
  for (auto x : xs) sum += x;
  const long double mean = sum / xs.size();
  long double ss = 0;
  for (auto x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (xs.size() - (sample ? 1 : 0)))};
}

struct Weighted {
  double tp_rate = 0, fp_rate = 0, recall = 0;
  std::optional<double> precision, f1;
};

// One-vs-rest counts enumerated cell by cell, then support-weighted.
inline Weighted weighted(const std::vector<std::vector<std::size_t>>& m) {
  const std::size_t k = m.size();
  double total = 0;
  for (const auto& row : m)
    for (auto v : row) total += static_cast<double>(v);

  Weighted w;
  double prec_sum = 0, f1_sum = 0;
  bool undefined = false;
  for (std::size_t c = 0; c < k; ++c) {
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t p = 0; p < k; ++p) {
        const double v = static_cast<double>(m[a][p]);
        if (a == c && p == c) tp += v;
        else if (a != c && p == c) fp += v;
        else if (a == c && p != c) fn += v;
        else tn += v;
      }
    }
    const double support = tp + fn;
    if (support == 0) continue;
    const double weight = support / total;
    const double tpr = tp / support;
    const double fpr = fp + tn == 0 ? 0.0 : fp / (fp + tn);
    w.tp_rate += weight * tpr;
    w.fp_rate += weight * fpr;
    w.recall += weight * tpr;
    if (tp + fp == 0) {
      undefined = true;
      continue;
    }
    const double prec = tp / (tp + fp);
    prec_sum += weight * prec;
    f1_sum += weight * (prec + tpr == 0 ? 0.0 : 2 * prec * tpr / (prec + tpr));
  }
  if (!undefined) {
    w.precision = prec_sum;
    w.f1 = f1_sum;
  }
  return w;
}

} // namespace oracle

} // namespace hm::test
