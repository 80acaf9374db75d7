#pragma once

// Seeded synthetic cohort: per-second head-movement sessions whose segment
// magnitude moments are planted from emotion intensities and trait effects.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hm/features.hpp"
#include "hm/session.hpp"
#include "hm/traits.hpp"
#include "hm/wire.hpp"

namespace hm::synth {

// Target magnitude moments of one segment: acceleration in g, rotation in deg/s.
struct MomentTargets {
  double acc_mean = 0.0;
  double acc_std = 0.0;
  double gyro_mean = 0.0;
  double gyro_std = 0.0;

  friend bool operator==(const MomentTargets&, const MomentTargets&) = default;
};

struct EmotionIntensity {
  double acc_scale = 1.0;
  double gyro_scale = 1.0;
};

inline constexpr std::uint32_t kMinSegmentMs = 90'000;
inline constexpr std::uint32_t kMaxSegmentMs = 180'000;

struct SynthConfig {
  std::size_t n_participants = 46;
  std::uint64_t seed = 0;
  std::uint32_t sample_period_ms = 1000;
  std::uint32_t min_segment_ms = kMinSegmentMs;
  std::uint32_t max_segment_ms = kMaxSegmentMs;

  MomentTargets baseline{1.0, 0.02, 3.0, 1.0};
  // Multiplies the baseline; emotions absent from the map use 1.
  std::map<EmotionState, EmotionIntensity> emotion_intensity;
  // Additive shift per answer level: yes = 1, no = 0; Low/Medium/High = 0/1/2.
  std::map<TraitId, MomentTargets> trait_effects;
  // Standard deviation of the per-segment participant idiosyncrasy added to targets.
  MomentTargets participant_jitter{0.0, 0.0, 0.0, 0.0};
  // Samples are quantized to this raw grid so they survive the wire exactly.
  wire::ScaleConfig scale;

  // Throws InvalidConfig.
  void validate() const;
};

// Separable planted effects, used for acceptance.
SynthConfig strong_preset(std::uint64_t seed, std::size_t n_participants = 46);
// No planted effect; the negative control.
SynthConfig null_preset(std::uint64_t seed, std::size_t n_participants = 46);
std::optional<SynthConfig> preset(std::string_view name, std::uint64_t seed,
                                  std::size_t n_participants);

// baseline x intensity + trait shifts, before jitter.
MomentTargets planted_targets(const SynthConfig& cfg, const ParticipantRecord& record,
                              EmotionState emotion);

struct SynthParticipant {
  ParticipantRecord record;
  Session session;
  Timeline timeline;
  std::vector<MomentTargets> targets; // per timeline segment, jitter included
};

struct Cohort {
  SynthConfig config;
  std::vector<SynthParticipant> participants;
};

// Deterministic in cfg.seed. Participants are generated from per-participant
// derived seeds, so `threads` does not change the output.
Cohort generate_cohort(const SynthConfig& cfg, std::size_t threads = 1);

std::string participant_id(std::size_t index); // "P001" for index 0

// Writes <id>.jsonl, <id>.timeline.csv, traits.csv and manifest.json.
void write_cohort(const std::filesystem::path& dir, const Cohort& cohort, std::string_view preset_name);

} // namespace hm::synth
