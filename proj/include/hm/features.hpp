#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hm/imu.hpp"
#include "hm/session.hpp"

namespace hm {

// Moments of the translational (g) and rotational (deg/s) magnitudes over one
// emotion segment.
struct FeatureVector {
  double acc_mag_mean = 0.0;
  double acc_mag_std = 0.0;
  double gyro_mag_mean = 0.0;
  double gyro_mag_std = 0.0;

  static constexpr std::size_t kDims = 4;

  std::array<double, kDims> as_array() const {
    return {acc_mag_mean, acc_mag_std, gyro_mag_mean, gyro_mag_std};
  }
  static FeatureVector from_array(const std::array<double, kDims>& a) {
    return {a[0], a[1], a[2], a[3]};
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

enum class StdConvention {
  Population, // divide by n
  Sample,     // divide by n - 1
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

double magnitude(const Vec3& v);

// Throws EmptySeries. The Sample convention needs at least two values.
Moments moments(std::span<const double> series, StdConvention conv = StdConvention::Population);

inline constexpr std::size_t kMinSamplesPerEmotion = 2;

using EmotionFeatures = std::map<EmotionState, FeatureVector>;

// One feature vector per emotion present in the session. Throws
// InsufficientSamples when a present emotion has fewer than two samples.
EmotionFeatures featurize(const LabeledSession& session,
                          StdConvention conv = StdConvention::Population);

// One feature vector per timeline segment that received samples, keyed by
// segment index.
std::map<std::size_t, FeatureVector> featurize_segments(
    const LabeledSession& session, StdConvention conv = StdConvention::Population);

struct FeatureRow {
  std::string participant_id;
  EmotionState emotion = EmotionState::Neutral;
  FeatureVector features;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

// CSV: participant_id,emotion,acc_mag_mean,acc_mag_std,gyro_mag_mean,gyro_mag_std.
// Reals use the shortest round-trip decimal form.
std::string format_features_csv(const std::vector<FeatureRow>& rows);
// Throws MalformedRow or UnknownEmotion.
std::vector<FeatureRow> parse_features_csv(std::string_view text);
std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path);

// Per-sample magnitudes: t_ms,emotion,acc_mag,gyro_mag.
std::string format_trace_csv(const LabeledSession& session);

} // namespace hm
