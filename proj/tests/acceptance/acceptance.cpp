// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli_driver.hpp"
#include "hm/error.hpp"
#include "hm/features.hpp"
#include "hm/learn/metrics.hpp"
#include "hm/matrix.hpp"
#include "hm/synth.hpp"
#include "hm/wire.hpp"
#include "pipeline.hpp"
#include "support.hpp"

using namespace hm;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

void require(bool ok, const std::string& why) {
  if (!ok) throw std::runtime_error(why);
}

// Runs simulate -> featurize -> train -> evaluate through the CLI into `dir`.
nlohmann::json run_pipeline(const std::filesystem::path& dir, const std::string& preset, const std::string& seed) {
  using test::hm_run;
  const auto data = dir / "data";
  const auto sim = hm_run({"simulate", "--preset", preset, "--participants", "46", "--seed", seed, "--out", data.string()});
  require(sim.code == 0, "simulate failed: " + sim.err);
  const auto feat = hm_run({"featurize", "--data", data.string(), "--out", (dir / "features.csv").string()});
  require(feat.code == 0, "featurize failed: " + feat.err);
  const auto train = hm_run({"train", "--features", (dir / "features.csv").string(), "--traits",
                             (data / "traits.csv").string(), "--k", "5", "--seed", seed, "--out",
                             (dir / "models").string()});
  require(train.code == 0, "train failed: " + train.err);
  const auto eval = hm_run({"evaluate", "--models", (dir / "models").string(), "--report",
                            (dir / "report.json").string(), "--table", (dir / "table.txt").string()});
  require(eval.code == 0, "evaluate failed: " + eval.err);
  return nlohmann::json::parse(read_text_file(dir / "report.json"));
}

// ---------------------------------------------------------------------------

Outcome wire_round_trip() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 100'000; ++i) {
    const auto p = test::random_packet(rng);
    if (!(wire::decode_packet(wire::encode_packet(p)) == p)) return {false, "round-trip mismatch at packet " + std::to_string(i)};
  }

  constexpr std::size_t kPackets = 20'000;
  std::vector<wire::RawImuPacket> pkts;
  std::vector<std::uint8_t> stream;
  for (std::size_t i = 0; i < kPackets; ++i) {
    auto p = test::random_packet(rng);
    p.seq = static_cast<std::uint8_t>(i);
    pkts.push_back(p);
    const auto b = wire::encode_packet(p);
    stream.insert(stream.end(), b.begin(), b.end());
  }
  // 1% of the bytes, at most one per packet so no two flips can cancel.
  const std::size_t flips = stream.size() / 100;
  std::vector<std::size_t> victims(kPackets);
  for (std::size_t i = 0; i < kPackets; ++i) victims[i] = i;
  std::shuffle(victims.begin(), victims.end(), rng);
  victims.resize(flips);
  std::set<std::size_t> corrupted(victims.begin(), victims.end());
  std::uniform_int_distribution<std::size_t> offset(0, wire::kPacketSize - 1);
  std::uniform_int_distribution<int> mask(1, 255);
  for (auto v : victims) stream[v * wire::kPacketSize + offset(rng)] ^= static_cast<std::uint8_t>(mask(rng));

  std::vector<wire::RawImuPacket> expected;
  for (std::size_t i = 0; i < kPackets; ++i) {
    if (!corrupted.contains(i)) expected.push_back(pkts[i]);
  }
  const auto got = wire::frame_stream(stream);
  const double secs = seconds_since(t0);
  const bool exact = got.packets == expected;
  return {exact && secs < 5.0, "1e5 round-trips ok; " + std::to_string(flips) + " corrupted bytes, " +
                                   std::to_string(got.packets.size()) + "/" + std::to_string(expected.size()) +
                                   " clean packets recovered" + (exact ? " exactly" : " WITH MISMATCH") +
                                   "; " + fmt(secs, 2) + " s"};
}

Outcome feature_oracle() {
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<std::size_t> len(10, 400);
  std::uniform_int_distribution<std::uint32_t> cut(1, 9);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int s = 0; s < 1000; ++s) {
    const auto samples = test::random_samples(rng, len(rng), 1000);
    const std::uint32_t end = samples.back().t_ms + 1;
    // Two segments split at a random point; both need two samples.
    const std::uint32_t mid = end / 10 * cut(rng);
    if (mid == 0) continue;
    const auto tl = make_timeline({{EmotionState::Happy, 0, mid}, {EmotionState::Disgust, mid, end}});
    const auto l = label_samples("P", samples, tl);
    std::map<EmotionState, std::vector<long double>> acc, gyro;
    std::map<EmotionState, std::vector<double>> acc_d;
    for (const auto& sm : samples) {
      const auto e = sm.t_ms < mid ? EmotionState::Happy : EmotionState::Disgust;
      acc[e].push_back(test::oracle::norm(sm.acc));
      gyro[e].push_back(test::oracle::norm(sm.gyro));
      acc_d[e].push_back(magnitude(sm.acc));
      worst = std::max(worst, test::rel_err(magnitude(sm.gyro), static_cast<double>(test::oracle::norm(sm.gyro))));
    }
    if (acc[EmotionState::Happy].size() < 2 || acc[EmotionState::Disgust].size() < 2) continue;
    const auto fs = featurize(l);
    for (const auto& [e, fv] : fs) {
      const auto am = test::oracle::moments(acc[e]);
      const auto gm = test::oracle::moments(gyro[e]);
      const auto direct = moments(acc_d[e]);
      worst = std::max({worst, test::rel_err(fv.acc_mag_mean, static_cast<double>(am.mean)),
                        test::rel_err(fv.acc_mag_std, static_cast<double>(am.std)),
                        test::rel_err(fv.gyro_mag_mean, static_cast<double>(gm.mean)),
                        test::rel_err(fv.gyro_mag_std, static_cast<double>(gm.std)),
                        test::rel_err(direct.mean, static_cast<double>(am.mean)),
                        test::rel_err(direct.std, static_cast<double>(am.std))});
    }
    ++checked;
  }
  return {checked >= 900 && worst <= 1e-12,
          std::to_string(checked) + " sessions checked; worst relative error " + sci(worst)};
}

Outcome metrics_oracle() {
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<std::size_t> classes(2, 5);
  std::uniform_int_distribution<std::size_t> count(0, 25);
  double worst = 0.0;
  bool identity = true, nan_agree = true;
  for (int i = 0; i < 100; ++i) {
    const auto k = classes(rng);
    std::vector<std::vector<std::size_t>> rows(k, std::vector<std::size_t>(k));
    for (auto& r : rows)
      for (auto& v : r) v = count(rng);
    if (i % 5 == 0) {
      for (auto& r : rows) r[i % k] = 0; // a never-predicted class
    }
    rows[0][0] += 1;
    std::vector<std::string> domain;
    for (std::size_t c = 0; c < k; ++c) domain.push_back("c" + std::to_string(c));
    const auto cm = learn::ConfusionMatrix::from_rows(domain, rows);
    const auto got = learn::weighted_metrics(cm);
    const auto want = test::oracle::weighted(rows);
    auto diff = [](double a, double b) { return std::abs(a - b); };
    worst = std::max({worst, diff(got.tp_rate, want.tp_rate), diff(got.fp_rate, want.fp_rate),
                      diff(got.recall, want.recall)});
    nan_agree = nan_agree && got.precision.has_value() == want.precision.has_value() &&
                got.f1.has_value() == want.f1.has_value();
    if (got.precision && want.precision) worst = std::max(worst, diff(*got.precision, *want.precision));
    if (got.f1 && want.f1) worst = std::max(worst, diff(*got.f1, *want.f1));
    const double accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
    identity = identity && diff(got.tp_rate, accuracy) <= 1e-12 && diff(got.accuracy, accuracy) <= 1e-12;
  }

  const auto perfect = learn::weighted_metrics(learn::ConfusionMatrix::from_rows({"no", "yes"}, {{20, 0}, {0, 20}}));
  const bool table_row = perfect.tp_rate == 1.0 && perfect.fp_rate == 0.0 && perfect.precision == 1.0 &&
                         perfect.recall == 1.0 && perfect.f1 == 1.0;

  // Never-predicted class rendered through the report path.
  auto cohort = test::strong_cohort(8, 3);
  TrainOptions o;
  o.seed = 3;
  o.threads = 1;
  o.pool = {learn::OneRSpec{6}};
  auto m = train_matrix(cohort, o);
  auto& cell = m.grid.at({TraitId::HighFatIntake, EmotionState::Disgust});
  const auto data = trait_dataset(cohort, TraitId::HighFatIntake, EmotionState::Disgust);
  cell.selection.best_model = learn::constant_model(data.label_domain(), 0);
  cell.confusion = learn::confusion(cell.selection.best_model, data);
  cell.metrics = learn::weighted_metrics(cell.confusion);
  bool nan_rendered = false;
  const auto rendered = render_report(m);
  for (const auto& row : rendered["cells"]) {
    if (row["trait"] == "HighFatIntake" && row["emotion"] == "Disgust") {
      nan_rendered = row["precision"] == "NAN" && row["f1"] == "NAN";
    }
  }
  const auto table3 = learn::weighted_metrics(learn::ConfusionMatrix::from_rows({"no", "yes"}, {{22, 0}, {18, 0}}));
  const bool table3_ok = std::abs(table3.tp_rate - 0.55) < 1e-12 && std::abs(table3.fp_rate - 0.55) < 1e-12 &&
                         !table3.precision && std::abs(table3.recall - 0.55) < 1e-12 && !table3.f1;

  const bool pass = worst <= 1e-9 && identity && nan_agree && table_row && nan_rendered && table3_ok;
  return {pass, "100 matrices, worst abs diff " + sci(worst) + "; TPR==accuracy " +
                    (identity ? "yes" : "NO") + "; [[20,0],[0,20]] -> 100/0/100/100/100 " + (table_row ? "yes" : "NO") +
                    "; 22/18 constant -> 55/55/NAN/55/NAN " + (table3_ok ? "yes" : "NO") +
                    "; never-predicted class renders NAN " + (nan_rendered ? "yes" : "NO")};
}

Outcome matrix_shape() {
  struct Case {
    std::string preset;
    std::size_t n;
    std::uint64_t seed;
  };
  std::string detail;
  bool pass = true;
  for (const auto& c : {Case{"strong", 6, 11}, Case{"null", 9, 12}, Case{"strong", 46, 13}}) {
    const auto cohort = test::cohort_features(synth::generate_cohort(*synth::preset(c.preset, c.seed, c.n)));
    TrainOptions o;
    o.seed = c.seed;
    const auto m = train_matrix(cohort, o);
    const auto r = render_report(m);
    const bool ok = m.grid.size() == 35 && m.emotion_model.confusion.total() == 5 * c.n && r["cells"].size() == 35 &&
                    r["best_per_trait"].size() == 7 && r["emotion_model"].is_object();
    pass = pass && ok;
    detail += c.preset + "/" + std::to_string(c.n) + ": " + std::to_string(m.grid.size()) + "+1 models, " +
              std::to_string(r["cells"].size()) + "+" + std::to_string(r["best_per_trait"].size()) + "+1 rows; ";
  }
  return {pass, detail};
}

Outcome planted_signal(const nlohmann::json& report, double secs) {
  const auto& em = report["emotion_model"];
  const std::string resub = em["accuracy_fraction"];
  const double cv = em["cv_success_rate"];
  const bool resub_perfect = resub == "230/230";
  int strong_traits = 0;
  std::string best;
  for (const auto& row : report["best_per_trait"]) {
    const double rate = row["cv_success_rate"];
    if (rate >= 0.80) ++strong_traits;
    best += fmt(rate, 2) + " ";
  }
  const bool pass = resub_perfect && cv >= 0.90 && strong_traits >= 5 && secs < 60.0;
  return {pass, "emotion resub " + resub + ", cv " + fmt(cv) + "; traits with best-cell cv >= 0.80: " +
                    std::to_string(strong_traits) + "/7 [" + best + "]; pipeline " + fmt(secs, 1) + " s"};
}

Outcome negative_control(const nlohmann::json& report) {
  double sum = 0.0;
  for (const auto& row : report["cells"]) sum += row["cv_success_rate"].get<double>();
  const double mean = sum / static_cast<double>(report["cells"].size());
  return {mean <= 0.65, "mean best-cell cv rate over " + std::to_string(report["cells"].size()) + " cells = " + fmt(mean)};
}

Outcome aggregation() {
  const auto cohort = test::strong_cohort(6, 4);
  TrainOptions o;
  o.seed = 4;
  o.threads = 1;
  o.pool = {learn::OneRSpec{6}};
  auto m = train_matrix(cohort, o);
  // Order: Happy, Sad, Neutral, Surprise, Disgust; counts out of 40.
  const std::map<TraitId, std::array<std::size_t, kEmotionCount>> pattern{
      {TraitId::ReligiousPractitioner, {32, 36, 32, 25, 37}},
      {TraitId::HighFatIntake, {33, 40, 25, 35, 22}},
  };
  for (const auto& [t, counts] : pattern) {
    for (auto e : kAllEmotions) m.grid.at({t, e}).selection.resubstitution = {counts[emotion_index(e)], 40};
  }
  const auto best = best_per_trait(m);
  const auto practitioner = best.at(TraitId::ReligiousPractitioner).emotion;
  const auto fat = best.at(TraitId::HighFatIntake).emotion;
  return {practitioner == EmotionState::Disgust && fat == EmotionState::Sad,
          "Practitioner -> " + std::string(emotion_name(practitioner)) + ", Fat intake -> " +
              std::string(emotion_name(fat))};
}

Outcome determinism(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(a / "data")) {
    const auto name = e.path().filename();
    if (read_text_file(e.path()) != read_text_file(b / "data" / name)) return {false, name.string() + " differs"};
    ++files;
  }
  if (read_text_file(a / "report.json") != read_text_file(b / "report.json")) return {false, "report.json differs"};
  if (read_text_file(a / "table.txt") != read_text_file(b / "table.txt")) return {false, "table differs"};
  return {true, std::to_string(files) + " data files and the report are byte-identical across two runs"};
}

Outcome loopback(const std::filesystem::path& scratch, const std::filesystem::path& data) {
  const auto src = data / "P001.jsonl";
  int serve_code = -1;
  const auto fire = test::loopback(src, scratch / "fire.jsonl", scratch / "port1", false, serve_code);
  const bool fire_ok = fire.code == 0 && serve_code == 0 && read_session(scratch / "fire.jsonl") == read_session(src);

  auto small = read_session(src);
  small.samples.resize(10);
  write_session(scratch / "small.jsonl", small);
  const auto t0 = Clock::now();
  const auto slow = test::loopback(scratch / "small.jsonl", scratch / "slow.jsonl", scratch / "port2", true, serve_code);
  const double secs = seconds_since(t0);
  const bool slow_ok =
      slow.code == 0 && serve_code == 0 && read_session(scratch / "slow.jsonl") == small && secs >= 9.0;
  return {fire_ok && slow_ok, "firehose " + std::to_string(read_session(src).samples.size()) + " samples " +
                                  (fire_ok ? "equal" : "MISMATCH") + "; realtime 10 samples " +
                                  (slow_ok ? "equal" : "MISMATCH") + " in " + fmt(secs, 1) + " s"};
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

} // namespace

int main() {
  test::TempDir scratch;
  int failures = 0;
  auto report = [&](int id, const std::string& title, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << o.detail << "\n" << std::flush;
    if (!o.pass) ++failures;
  };

  report(1, "wire round-trip and corruption", guarded(wire_round_trip));
  report(2, "feature oracle equivalence", guarded(feature_oracle));
  report(3, "metrics oracle equivalence", guarded(metrics_oracle));
  report(4, "matrix shape", guarded(matrix_shape));

  nlohmann::json strong, strong_again, null;
  double strong_secs = 0.0;
  const auto run_a = scratch / "strong-a";
  const auto run_b = scratch / "strong-b";
  report(5, "planted-signal recovery (strong preset, 46 participants)", guarded([&] {
           const auto t0 = Clock::now();
           strong = run_pipeline(run_a, "strong", "7");
           strong_secs = seconds_since(t0);
           return planted_signal(strong, strong_secs);
         }));
  report(6, "negative control (null preset)", guarded([&] {
           null = run_pipeline(scratch / "null", "null", "7");
           return negative_control(null);
         }));
  report(7, "aggregation correctness", guarded(aggregation));
  report(8, "determinism", guarded([&] {
           run_pipeline(run_b, "strong", "7");
           return determinism(run_a, run_b);
         }));
  report(9, "TCP loopback", guarded([&] { return loopback(scratch.path(), run_a / "data"); }));

  std::cout << (failures == 0 ? "all 9 criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
