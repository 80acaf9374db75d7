#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hm {

// Acceleration in g, rotation rate in deg/s.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct ImuSample {
  std::uint32_t t_ms = 0;
  Vec3 acc;
  Vec3 gyro;

  friend bool operator==(const ImuSample&, const ImuSample&) = default;
};

enum class EmotionState : std::uint8_t { Happy, Sad, Neutral, Surprise, Disgust };

inline constexpr std::size_t kEmotionCount = 5;

// Fixed iteration and tie-break order.
inline constexpr std::array<EmotionState, kEmotionCount> kAllEmotions{
    EmotionState::Happy, EmotionState::Sad, EmotionState::Neutral, EmotionState::Surprise,
    EmotionState::Disgust};

std::string_view emotion_name(EmotionState e);

// Case-insensitive; nullopt for anything outside the five states.
std::optional<EmotionState> parse_emotion(std::string_view name);

inline std::size_t emotion_index(EmotionState e) { return static_cast<std::size_t>(e); }

} // namespace hm
