#include "hm/imu.hpp"

#include "strings.hpp"

namespace hm {

std::string_view emotion_name(EmotionState e) {
  switch (e) {
  case EmotionState::Happy: return "Happy";
  case EmotionState::Sad: return "Sad";
  case EmotionState::Neutral: return "Neutral";
  case EmotionState::Surprise: return "Surprise";
  case EmotionState::Disgust: return "Disgust";
  }
  return "?";
}

std::optional<EmotionState> parse_emotion(std::string_view name) {
  const auto trimmed = detail::trim(name);
  for (auto e : kAllEmotions) {
    if (detail::iequals(trimmed, emotion_name(e))) return e;
  }
  return std::nullopt;
}

} // namespace hm
