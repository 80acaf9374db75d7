#include <doctest.h>

#include <cmath>
#include <set>

#include "hm/error.hpp"
#include "hm/features.hpp"
#include "hm/synth.hpp"
#include "pipeline.hpp"
#include "support.hpp"

using namespace hm;
using namespace hm::synth;

TEST_SUITE("synth") {

TEST_CASE("config validation") {
  CHECK_THROWS_AS(strong_preset(1, 3).validate(), Error);
  auto cfg = strong_preset(1, 10);
  CHECK_NOTHROW(cfg.validate());
  cfg.sample_period_ms = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = strong_preset(1, 10);
  cfg.min_segment_ms = 50'000;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_FALSE(preset("medium", 1, 10).has_value());
  CHECK(preset("null", 1, 10).has_value());
}

TEST_CASE("traits are balanced") {
  for (std::size_t n : {4u, 7u, 12u, 46u}) {
    const auto cohort = generate_cohort(null_preset(n, n));
    std::map<TraitId, std::map<std::string, std::size_t>> counts;
    for (const auto& p : cohort.participants) {
      for (const auto& [t, v] : p.record.answers) counts[t][v]++;
      CHECK(p.record.age >= 18);
      CHECK(p.record.age <= 45);
    }
    for (auto t : kAllTraits) {
      for (const auto& v : trait_domain(t)) {
        const double share = static_cast<double>(n) / trait_domain(t).size();
        CHECK(std::abs(static_cast<double>(counts[t][v]) - share) <= 1.0);
      }
      if (trait_domain(t).size() == 2) {
        const auto yes = counts[t]["yes"];
        CHECK((yes == n / 2 || yes == (n + 1) / 2));
      }
    }
  }
}

TEST_CASE("timelines are contiguous and sampling is regular") {
  const auto cohort = generate_cohort(strong_preset(3, 6));
  for (const auto& p : cohort.participants) {
    const auto& segs = p.timeline.segments();
    REQUIRE(segs.size() == kEmotionCount);
    std::set<EmotionState> seen;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      seen.insert(segs[i].emotion);
      CHECK(segs[i].end_ms - segs[i].start_ms >= kMinSegmentMs);
      CHECK(segs[i].end_ms - segs[i].start_ms <= kMaxSegmentMs);
      if (i > 0) CHECK(segs[i].start_ms == segs[i - 1].end_ms);
    }
    CHECK(seen.size() == kEmotionCount);
    const auto l = label_samples(p.record.id, p.session.samples, p.timeline);
    CHECK(l.dropped == 0);
    for (std::size_t i = 1; i < l.labeled.size(); ++i) {
      if (l.labeled[i].segment == l.labeled[i - 1].segment) {
        CHECK(l.labeled[i].sample.t_ms - l.labeled[i - 1].sample.t_ms == cohort.config.sample_period_ms);
      }
    }
  }
}

TEST_CASE("segment moments hit their targets") {
  for (const auto& cfg : {strong_preset(4, 8), null_preset(4, 8)}) {
    const auto cohort = generate_cohort(cfg);
    for (const auto& p : cohort.participants) {
      const auto l = label_samples(p.record.id, p.session.samples, p.timeline);
      const auto segs = featurize_segments(l);
      for (const auto& [idx, fv] : segs) {
        const auto& t = p.targets[idx];
        CHECK(test::rel_err(fv.acc_mag_mean, t.acc_mean) < 0.05);
        CHECK(test::rel_err(fv.acc_mag_std, t.acc_std) < 0.05);
        CHECK(test::rel_err(fv.gyro_mag_mean, t.gyro_mean) < 0.05);
        CHECK(test::rel_err(fv.gyro_mag_std, t.gyro_std) < 0.05);
      }
    }
  }
}

TEST_CASE("planted targets follow the trait effects") {
  const auto cfg = strong_preset(1, 10);
  ParticipantRecord base;
  for (auto t : kAllTraits) base.answers[t] = trait_domain(t).front();
  auto smoker = base;
  smoker.answers[TraitId::Smoker] = "yes";
  const auto a = planted_targets(cfg, base, EmotionState::Neutral);
  const auto b = planted_targets(cfg, smoker, EmotionState::Neutral);
  CHECK(b.acc_mean - a.acc_mean == doctest::Approx(cfg.trait_effects.at(TraitId::Smoker).acc_mean));
  CHECK(b.gyro_mean == a.gyro_mean);

  const auto null = null_preset(1, 10);
  CHECK(planted_targets(null, base, EmotionState::Happy) == planted_targets(null, smoker, EmotionState::Disgust));
}

TEST_CASE("generation is deterministic and thread independent") {
  const auto cfg = strong_preset(42, 9);
  const auto a = generate_cohort(cfg, 1);
  const auto b = generate_cohort(cfg, 4);
  REQUIRE(a.participants.size() == b.participants.size());
  for (std::size_t i = 0; i < a.participants.size(); ++i) {
    CHECK(a.participants[i].record == b.participants[i].record);
    CHECK(format_session(a.participants[i].session) == format_session(b.participants[i].session));
    CHECK(a.participants[i].timeline == b.participants[i].timeline);
  }
  const auto c = generate_cohort(strong_preset(43, 9));
  CHECK_FALSE(format_session(a.participants[0].session) == format_session(c.participants[0].session));
}

TEST_CASE("samples sit on the wire grid") {
  const auto cohort = generate_cohort(strong_preset(5, 4));
  for (const auto& s : cohort.participants[0].session.samples) {
    CHECK(wire::raw_to_physical(wire::physical_to_raw(s, 0)) == s);
  }
}

TEST_CASE("cohort files are written") {
  test::TempDir dir;
  const auto cohort = generate_cohort(strong_preset(6, 5));
  write_cohort(dir.path(), cohort, "strong");
  for (const auto& p : cohort.participants) {
    CHECK(read_session(dir / (p.record.id + ".jsonl")) == p.session);
    CHECK(read_timeline(dir / (p.record.id + ".timeline.csv")) == p.timeline);
  }
  const auto records = read_traits_csv(dir / "traits.csv");
  REQUIRE(records.size() == 5);
  CHECK(records[2] == cohort.participants[2].record);
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(participant_id(0) == "P001");
}

TEST_CASE("held-out smokers are recognized") {
  TrainOptions o;
  o.seed = 21;
  o.threads = 1;
  const auto m = train_matrix(test::strong_cohort(46, 21), o);
  const auto held_out = test::strong_cohort(10, 22);
  std::size_t smokers = 0;
  for (const auto& p : held_out) {
    if (p.record.answers.at(TraitId::Smoker) != "yes") continue;
    ++smokers;
    CHECK(predict_trait(m, p.features, TraitId::Smoker) == "yes");
    for (const auto& [e, fv] : p.features) CHECK(predict_emotion(m, fv) == e);
  }
  CHECK(smokers == 5);
}

}
