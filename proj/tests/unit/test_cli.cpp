#include <doctest.h>

#include <json.hpp>

#include "cli_driver.hpp"
#include "hm/features.hpp"
#include "support.hpp"

using namespace hm;
using hm::test::hm_run;

namespace {

std::string slurp(const std::filesystem::path& p) { return read_text_file(p); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 1") {
  CHECK(hm_run({}).code == cli::kExitUsage);
  CHECK(hm_run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(hm_run({"simulate", "--out", "x"}).code == cli::kExitUsage); // --seed missing
  CHECK(hm_run({"simulate", "--seed", "1", "--out", "x", "--bogus"}).code == cli::kExitUsage);
  CHECK(hm_run({"train", "--features", "/nonexistent", "--traits", "/nonexistent", "--seed", "1", "--out", "m"}).code ==
        cli::kExitUsage);
  const auto r = hm_run({"featurize"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits with 0") {
  const auto r = hm_run({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("serve-device") != std::string::npos);
}

TEST_CASE("bad data exits with 2") {
  test::TempDir dir;
  write_text_file(dir / "f.csv", "nonsense\n");
  write_text_file(dir / "t.csv", "nonsense\n");
  const auto r = hm_run({"train", "--features", (dir / "f.csv").string(), "--traits", (dir / "t.csv").string(),
                         "--seed", "1", "--out", (dir / "m").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("MalformedRow") != std::string::npos);
  CHECK(hm_run({"simulate", "--seed", "1", "--participants", "2", "--out", (dir / "d").string()}).code ==
        cli::kExitData);
}

TEST_CASE("full workflow") {
  test::TempDir dir;
  const auto data = dir / "data";
  const auto sim = hm_run({"simulate", "--preset", "strong", "--participants", "8", "--seed", "7", "--out", data.string()});
  REQUIRE(sim.code == 0);
  std::size_t sessions = 0, timelines = 0;
  for (const auto& e : std::filesystem::directory_iterator(data)) {
    const auto name = e.path().filename().string();
    if (name.ends_with(".timeline.csv")) ++timelines;
    else if (name.ends_with(".jsonl")) ++sessions;
  }
  CHECK(sessions == 8);
  CHECK(timelines == 8);
  CHECK(std::filesystem::exists(data / "traits.csv"));
  CHECK(std::filesystem::exists(data / "manifest.json"));

  const auto features = dir / "features.csv";
  REQUIRE(hm_run({"featurize", "--data", data.string(), "--out", features.string()}).code == 0);
  CHECK(read_features_csv(features).size() == 40);

  const auto single = hm_run({"featurize", "--session", (data / "P001.jsonl").string(), "--timeline",
                              (data / "P001.timeline.csv").string()});
  REQUIRE(single.code == 0);
  CHECK(parse_features_csv(single.out).size() == 5);

  const auto models = dir / "models";
  REQUIRE(hm_run({"train", "--features", features.string(), "--traits", (data / "traits.csv").string(), "--k", "5",
                  "--seed", "7", "--out", models.string(), "--pool", "OneR,KNN"})
              .code == 0);

  const auto report = dir / "report.json";
  const auto ev = hm_run({"evaluate", "--models", models.string(), "--report", report.string()});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("Smoker-Happy") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["cells"].size() == 35);
  CHECK(j["best_per_trait"].size() == 7);
  CHECK(j["emotion_model"].is_object());
  for (const auto& c : j["cells"]) CHECK(c["candidates"].size() == 2);

  const auto pr = hm_run({"predict", "--models", models.string(), "--session", (data / "P001.jsonl").string(),
                          "--timeline", (data / "P001.timeline.csv").string()});
  REQUIRE(pr.code == 0);
  const auto p = nlohmann::json::parse(pr.out);
  CHECK(p["traits"].size() == 7);
  CHECK(p["segments"].size() == 5);
  for (const auto& s : p["segments"]) CHECK(s["predicted_emotion"] == s["emotion"]);

  const auto tr = hm_run({"trace", "--session", (data / "P001.jsonl").string(), "--timeline",
                          (data / "P001.timeline.csv").string()});
  REQUIRE(tr.code == 0);
  CHECK(tr.out.starts_with("t_ms,emotion,acc_mag,gyro_mag\n"));

  CHECK(hm_run({"train", "--features", features.string(), "--traits", (data / "traits.csv").string(), "--seed", "7",
                "--out", models.string(), "--pool", "SVM"})
            .code == cli::kExitUsage);
}

TEST_CASE("serve-device and capture loop back a session") {
  test::TempDir dir;
  REQUIRE(hm_run({"simulate", "--participants", "4", "--seed", "3", "--out", (dir / "d").string()}).code == 0);
  const auto src = dir / "d" / "P002.jsonl";
  int serve_code = -1;
  const auto r = test::loopback(src, dir / "cap.jsonl", dir / "port", false, serve_code, "P002");
  CHECK(serve_code == 0);
  REQUIRE(r.code == 0);
  CHECK(read_session(dir / "cap.jsonl") == read_session(src));
}

}
