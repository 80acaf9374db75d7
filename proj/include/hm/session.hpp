#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hm/imu.hpp"

namespace hm {

// Half-open interval [start_ms, end_ms) during which one stimulus plays.
struct Segment {
  EmotionState emotion = EmotionState::Neutral;
  std::uint32_t start_ms = 0;
  std::uint32_t end_ms = 0;

  bool contains(std::uint32_t t_ms) const { return t_ms >= start_ms && t_ms < end_ms; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Sorted, non-overlapping segments. Construct through make_timeline or
// parse_timeline so the invariants are checked.
class Timeline {
public:
  Timeline() = default;

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }

  // Index of the segment containing t_ms, or npos.
  std::size_t find(std::uint32_t t_ms) const;

  friend bool operator==(const Timeline&, const Timeline&) = default;
  friend Timeline make_timeline(std::vector<Segment> segments);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::vector<Segment> segments_;
};

// Throws InvertedInterval or OverlappingSegments. Segments may be given in
// any order; they are sorted by start_ms.
Timeline make_timeline(std::vector<Segment> segments);

// CSV with header `emotion,start_ms,end_ms`. Throws MalformedRow,
// UnknownEmotion, InvertedInterval or OverlappingSegments.
Timeline parse_timeline(std::string_view text);
Timeline read_timeline(const std::filesystem::path& path);
std::string format_timeline(const Timeline& tl);
void write_timeline(const std::filesystem::path& path, const Timeline& tl);

// Unlabeled recording of one participant, as persisted on disk.
struct Session {
  std::string participant_id;
  std::vector<ImuSample> samples;

  friend bool operator==(const Session&, const Session&) = default;
};

struct LabeledSample {
  ImuSample sample;
  EmotionState emotion = EmotionState::Neutral;
  std::size_t segment = 0; // index into the timeline the sample was labeled against

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct LabeledSession {
  std::string participant_id;
  std::vector<LabeledSample> labeled;
  std::size_t dropped = 0; // samples outside every segment
};

// Throws UnsortedSamples when timestamps decrease.
LabeledSession label_samples(std::string_view participant_id, const std::vector<ImuSample>& samples,
                             const Timeline& tl);

// JSON-lines: a header object {"participant_id":...} then one object per sample.
std::string format_session(const Session& session);
Session parse_session(std::string_view text);

// Throws IoFailure; read also throws MalformedLine.
void write_session(const std::filesystem::path& path, const Session& session);
Session read_session(const std::filesystem::path& path);

// Whole-file helpers shared by the readers and writers.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace hm
