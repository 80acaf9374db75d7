#include "hm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include <json.hpp>

#include "hm/error.hpp"
#include "hm/parallel.hpp"

namespace hm::synth {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

bool finite_nonneg(const MomentTargets& m) {
  for (double v : {m.acc_mean, m.acc_std, m.gyro_mean, m.gyro_std}) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double level(TraitId t, const std::string& answer) {
  const auto& domain = trait_domain(t);
  const auto it = std::find(domain.begin(), domain.end(), answer);
  return static_cast<double>(it - domain.begin());
}

Vec3 normalized(Vec3 v) {
  const double n = std::hypot(v.x, v.y, v.z);
  if (n == 0.0) return {0.0, 0.0, 1.0};
  return {v.x / n, v.y / n, v.z / n};
}

// n standard-normal draws shifted and scaled so their mean is exactly 0 and
// population std exactly 1.
std::vector<double> standardized_normals(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (auto& v : z) v = normal(rng);
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  for (auto& v : z) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return z;
}

// Balanced answers for one trait: every level appears floor(n/L) or
// ceil(n/L) times, in shuffled order.
std::vector<std::string> balanced_answers(TraitId t, std::size_t n, std::mt19937_64& rng) {
  const auto& domain = trait_domain(t);
  std::vector<std::size_t> levels(domain.size());
  std::iota(levels.begin(), levels.end(), 0);
  std::shuffle(levels.begin(), levels.end(), rng); // which levels get the remainder
  std::vector<std::string> answers;
  answers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) answers.push_back(domain[levels[i % levels.size()]]);
  std::shuffle(answers.begin(), answers.end(), rng);
  return answers;
}

SynthParticipant generate_participant(const SynthConfig& cfg, ParticipantRecord record,
                                      std::size_t index) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(index + 1)));
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<EmotionState> order(kAllEmotions.begin(), kAllEmotions.end());
  std::shuffle(order.begin(), order.end(), rng);

  const auto min_n = (cfg.min_segment_ms + cfg.sample_period_ms - 1) / cfg.sample_period_ms;
  const auto max_n = cfg.max_segment_ms / cfg.sample_period_ms;
  std::uniform_int_distribution<std::uint32_t> segment_samples(min_n, max_n);

  // Head orientation relative to gravity; drifts slowly through the session.
  Vec3 posture = normalized({0.15 * normal(rng), 0.15 * normal(rng), 1.0});

  SynthParticipant p;
  p.record = std::move(record);
  p.session.participant_id = p.record.id;
  std::vector<Segment> segments;
  std::uint32_t t = 0;
  for (auto emotion : order) {
    const auto n = segment_samples(rng);
    const std::uint32_t start = t;
    const std::uint32_t end = start + n * cfg.sample_period_ms;
    segments.push_back({emotion, start, end});

    auto target = planted_targets(cfg, p.record, emotion);
    target.acc_mean = std::max(0.0, target.acc_mean + cfg.participant_jitter.acc_mean * normal(rng));
    target.acc_std = std::max(0.0, target.acc_std + cfg.participant_jitter.acc_std * normal(rng));
    target.gyro_mean = std::max(0.0, target.gyro_mean + cfg.participant_jitter.gyro_mean * normal(rng));
    target.gyro_std = std::max(0.0, target.gyro_std + cfg.participant_jitter.gyro_std * normal(rng));
    p.targets.push_back(target);

    const auto acc_z = standardized_normals(n, rng);
    const auto gyro_z = standardized_normals(n, rng);
    for (std::uint32_t i = 0; i < n; ++i) {
      posture = normalized({posture.x + 0.01 * normal(rng), posture.y + 0.01 * normal(rng),
                            posture.z + 0.01 * normal(rng)});
      const Vec3 acc_dir = normalized({posture.x + 0.05 * normal(rng), posture.y + 0.05 * normal(rng),
                                       posture.z + 0.05 * normal(rng)});
      const Vec3 gyro_dir = normalized({normal(rng), normal(rng), normal(rng)});
      const double acc_mag = std::max(0.0, target.acc_mean + target.acc_std * acc_z[i]);
      const double gyro_mag = std::max(0.0, target.gyro_mean + target.gyro_std * gyro_z[i]);

      ImuSample s;
      s.t_ms = start + i * cfg.sample_period_ms;
      s.acc = {acc_mag * acc_dir.x, acc_mag * acc_dir.y, acc_mag * acc_dir.z};
      s.gyro = {gyro_mag * gyro_dir.x, gyro_mag * gyro_dir.y, gyro_mag * gyro_dir.z};
      const auto raw = wire::physical_to_raw(s, static_cast<std::uint8_t>(i), cfg.scale);
      p.session.samples.push_back(wire::raw_to_physical(raw, cfg.scale));
    }
    t = end;
  }
  p.timeline = make_timeline(std::move(segments));
  // Targets follow the sorted timeline, which is already chronological.
  return p;
}

} // namespace

void SynthConfig::validate() const {
  require(n_participants >= 4, "n_participants must be at least 4");
  require(sample_period_ms > 0, "sample_period_ms must be positive");
  require(min_segment_ms >= kMinSegmentMs && max_segment_ms <= kMaxSegmentMs &&
              min_segment_ms <= max_segment_ms,
          "segment durations must lie within [90000, 180000] ms");
  require(max_segment_ms / sample_period_ms >= 2 &&
              (min_segment_ms + sample_period_ms - 1) / sample_period_ms <=
                  max_segment_ms / sample_period_ms,
          "sample period too long for the segment durations");
  require(finite_nonneg(baseline) && baseline.acc_mean > 0.0 && baseline.gyro_mean > 0.0,
          "baseline moments must be positive");
  for (const auto& [e, s] : emotion_intensity) {
    require(std::isfinite(s.acc_scale) && s.acc_scale > 0.0 && std::isfinite(s.gyro_scale) &&
                s.gyro_scale > 0.0,
            "emotion intensity scales must be positive");
  }
  for (const auto& [t, eff] : trait_effects) {
    for (double v : {eff.acc_mean, eff.acc_std, eff.gyro_mean, eff.gyro_std}) {
      require(std::isfinite(v), "trait effects must be finite");
    }
  }
  require(finite_nonneg(participant_jitter), "participant jitter must be non-negative");
  scale.validate();
}

SynthConfig strong_preset(std::uint64_t seed, std::size_t n_participants) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_participants = n_participants;
  // Rotation carries most of the emotion signal: calm videos damp head
  // movement, arousing ones amplify it.
  cfg.emotion_intensity = {
      {EmotionState::Happy, {1.16, 3.5}},   {EmotionState::Sad, {0.95, 0.5}},
      {EmotionState::Neutral, {1.0, 1.0}},  {EmotionState::Surprise, {1.25, 6.0}},
      {EmotionState::Disgust, {1.08, 2.0}},
  };
  // Two traits share each moment at different amplitudes; FastFood is graded.
  cfg.trait_effects = {
      {TraitId::Smoker, {0.20, 0.0, 0.0, 0.0}},
      {TraitId::HeartDiseaseInFamily, {0.06, 0.0, 0.0, 0.0}},
      {TraitId::HighFatIntake, {0.0, 0.03, 0.0, 0.0}},
      {TraitId::DiabetesInFamily, {0.0, 0.01, 0.0, 0.0}},
      {TraitId::ReligiousPractitioner, {0.0, 0.0, 0.6, 0.0}},
      {TraitId::FastFoodIntake, {0.0, 0.0, 0.2, 0.0}},
      {TraitId::HighSugarIntake, {0.0, 0.0, 0.0, 0.4}},
  };
  cfg.participant_jitter = {0.008, 0.0015, 0.04, 0.03};
  return cfg;
}

SynthConfig null_preset(std::uint64_t seed, std::size_t n_participants) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_participants = n_participants;
  cfg.participant_jitter = {0.02, 0.004, 0.3, 0.1};
  return cfg;
}

std::optional<SynthConfig> preset(std::string_view name, std::uint64_t seed,
                                  std::size_t n_participants) {
  if (name == "strong") return strong_preset(seed, n_participants);
  if (name == "null") return null_preset(seed, n_participants);
  return std::nullopt;
}

MomentTargets planted_targets(const SynthConfig& cfg, const ParticipantRecord& record,
                              EmotionState emotion) {
  EmotionIntensity intensity;
  if (const auto it = cfg.emotion_intensity.find(emotion); it != cfg.emotion_intensity.end()) {
    intensity = it->second;
  }
  MomentTargets t{cfg.baseline.acc_mean * intensity.acc_scale, cfg.baseline.acc_std * intensity.acc_scale,
                  cfg.baseline.gyro_mean * intensity.gyro_scale,
                  cfg.baseline.gyro_std * intensity.gyro_scale};
  for (const auto& [trait, eff] : cfg.trait_effects) {
    const auto answer = record.answers.find(trait);
    if (answer == record.answers.end()) continue;
    const double lv = level(trait, answer->second);
    t.acc_mean += lv * eff.acc_mean;
    t.acc_std += lv * eff.acc_std;
    t.gyro_mean += lv * eff.gyro_mean;
    t.gyro_std += lv * eff.gyro_std;
  }
  return t;
}

std::string participant_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "P%03zu", index + 1);
  return buf;
}

Cohort generate_cohort(const SynthConfig& cfg, std::size_t threads) {
  cfg.validate();
  const auto n = cfg.n_participants;

  // Cohort-level draws (balanced answers, demographics) come from one stream.
  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::vector<ParticipantRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) records[i].id = participant_id(i);
  for (auto t : kAllTraits) {
    const auto answers = balanced_answers(t, n, rng);
    for (std::size_t i = 0; i < n; ++i) records[i].answers[t] = answers[i];
  }
  const auto females = static_cast<std::size_t>(std::lround(0.45 * static_cast<double>(n)));
  std::vector<Gender> genders(n, Gender::Male);
  std::fill(genders.begin(), genders.begin() + static_cast<std::ptrdiff_t>(females), Gender::Female);
  std::shuffle(genders.begin(), genders.end(), rng);
  std::uniform_int_distribution<int> age(18, 45);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].gender = genders[i];
    records[i].age = age(rng);
  }

  Cohort cohort;
  cohort.config = cfg;
  std::vector<std::optional<SynthParticipant>> slots(n);
  parallel_for(n, threads, [&](std::size_t i) { slots[i] = generate_participant(cfg, records[i], i); });
  for (auto& s : slots) cohort.participants.push_back(std::move(*s));
  return cohort;
}

namespace {

nlohmann::ordered_json targets_json(const MomentTargets& t) {
  return {{"acc_mag_mean", t.acc_mean},
          {"acc_mag_std", t.acc_std},
          {"gyro_mag_mean", t.gyro_mean},
          {"gyro_mag_std", t.gyro_std}};
}

} // namespace

void write_cohort(const std::filesystem::path& dir, const Cohort& cohort, std::string_view preset_name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<ParticipantRecord> records;
  nlohmann::ordered_json participants = nlohmann::ordered_json::array();
  for (const auto& p : cohort.participants) {
    write_session(dir / (p.record.id + ".jsonl"), p.session);
    write_timeline(dir / (p.record.id + ".timeline.csv"), p.timeline);
    records.push_back(p.record);

    nlohmann::ordered_json traits;
    for (auto t : kAllTraits) traits[std::string(trait_name(t))] = p.record.answers.at(t);
    nlohmann::ordered_json segments = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < p.timeline.segments().size(); ++s) {
      const auto& seg = p.timeline.segments()[s];
      segments.push_back({{"emotion", emotion_name(seg.emotion)},
                          {"start_ms", seg.start_ms},
                          {"end_ms", seg.end_ms},
                          {"targets", targets_json(p.targets[s])}});
    }
    participants.push_back({{"participant_id", p.record.id},
                            {"age", p.record.age},
                            {"gender", gender_name(p.record.gender)},
                            {"traits", traits},
                            {"segments", segments}});
  }
  write_text_file(dir / "traits.csv", format_traits_csv(records));

  const auto& cfg = cohort.config;
  nlohmann::ordered_json manifest;
  manifest["preset"] = preset_name;
  manifest["seed"] = cfg.seed;
  manifest["n_participants"] = cfg.n_participants;
  manifest["sample_period_ms"] = cfg.sample_period_ms;
  manifest["participants"] = std::move(participants);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

} // namespace hm::synth
