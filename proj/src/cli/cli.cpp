#include "hm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "hm/device.hpp"
#include "hm/error.hpp"
#include "hm/features.hpp"
#include "hm/matrix.hpp"
#include "hm/session.hpp"
#include "hm/synth.hpp"

namespace hm::cli {

namespace fs = std::filesystem;

namespace {

// Raised for flag combinations CLI11 cannot express; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::optional<fs::path>& path, const std::string& text, std::ostream& out) {
  if (path) {
    write_text_file(*path, text);
  } else {
    out << text;
  }
}

struct ScaleFlags {
  double acc_lsb = wire::ScaleConfig{}.acc_lsb_per_g;
  double gyro_lsb = wire::ScaleConfig{}.gyro_lsb_per_dps;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--acc-lsb", acc_lsb, "Accelerometer counts per g")->capture_default_str();
    cmd.add_option("--gyro-lsb", gyro_lsb, "Gyroscope counts per deg/s")->capture_default_str();
  }
  wire::ScaleConfig config() const {
    wire::ScaleConfig s{acc_lsb, gyro_lsb};
    s.validate();
    return s;
  }
};

struct SessionInput {
  Session session;
  Timeline timeline;
  LabeledSession labeled;
};

SessionInput load_labeled(const fs::path& session_path, const fs::path& timeline_path) {
  SessionInput in;
  in.session = read_session(session_path);
  in.timeline = read_timeline(timeline_path);
  in.labeled = label_samples(in.session.participant_id, in.session.samples, in.timeline);
  return in;
}

// *.jsonl sessions in `dir` that have a sibling <id>.timeline.csv, by name.
std::vector<std::pair<fs::path, fs::path>> session_pairs(const fs::path& dir) {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (p.extension() != ".jsonl") continue;
    auto timeline = p.parent_path() / (p.stem().string() + ".timeline.csv");
    if (fs::exists(timeline)) pairs.emplace_back(p, timeline);
  }
  if (ec) throw Error(ErrorKind::IoFailure, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string preset = "strong";
  std::size_t participants = 46;
  std::uint64_t seed = 0;
  std::uint32_t period_ms = 1000;
  fs::path out;
  std::size_t threads = 1;
};

int cmd_simulate(const SimulateArgs& a, std::ostream&, std::ostream& err) {
  auto cfg = synth::preset(a.preset, a.seed, a.participants);
  if (!cfg) throw UsageError("unknown preset '" + a.preset + "' (expected strong or null)");
  cfg->sample_period_ms = a.period_ms;
  const auto cohort = synth::generate_cohort(*cfg, a.threads);
  synth::write_cohort(a.out, cohort, a.preset);
  err << "simulate: wrote " << cohort.participants.size() << " participants (" << a.preset
      << ", seed " << a.seed << ") to " << a.out.string() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------ serve-device

struct ServeArgs {
  fs::path session;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::uint32_t period_ms = 1000;
  bool realtime = false;
  bool once = false;
  std::optional<fs::path> port_file;
  ScaleFlags scale;
};

int cmd_serve(const ServeArgs& a, std::ostream&, std::ostream& err) {
  const auto session = read_session(a.session);
  device::StreamOptions options{a.period_ms, a.realtime, a.scale.config()};
  const auto listener = device::Listener::open(a.host, a.port);
  err << "serve-device: listening on " << a.host << ":" << listener.port() << "\n" << std::flush;
  if (a.port_file) write_text_file(*a.port_file, std::to_string(listener.port()) + "\n");
  do {
    const auto client = listener.accept();
    try {
      const auto sent = device::stream_session(client, session, options);
      err << "serve-device: streamed " << sent << " packets\n";
    } catch (const Error& e) {
      // A client hanging up early ends that connection, not the server.
      err << "serve-device: " << e.what() << "\n";
    }
  } while (!a.once);
  return kExitOk;
}

// ----------------------------------------------------------------- capture

struct CaptureArgs {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  fs::path out;
  std::string participant = "P000";
  ScaleFlags scale;
};

int cmd_capture(const CaptureArgs& a, std::ostream&, std::ostream& err) {
  const auto connection = device::connect_to(a.host, a.port);
  const auto result = device::capture(connection, a.participant, a.scale.config());
  write_session(a.out, result.session);
  err << "capture: " << result.stats.packets << " packets, " << result.stats.skipped_bytes
      << " skipped bytes, " << result.stats.sequence_gaps << " sequence gaps\n";
  return kExitOk;
}

// --------------------------------------------------------------- featurize

struct FeaturizeArgs {
  std::optional<fs::path> data;
  std::optional<fs::path> session;
  std::optional<fs::path> timeline;
  std::optional<fs::path> out;
  std::string std_convention = "population";
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.data.has_value() == (a.session.has_value() || a.timeline.has_value())) {
    throw UsageError("featurize needs either --data DIR or --session FILE --timeline FILE");
  }
  if (!a.data && (!a.session || !a.timeline)) {
    throw UsageError("--session and --timeline must be given together");
  }
  const auto conv = a.std_convention == "sample" ? StdConvention::Sample : StdConvention::Population;

  std::vector<std::pair<fs::path, fs::path>> inputs;
  if (a.data) {
    inputs = session_pairs(*a.data);
    if (inputs.empty()) {
      throw Error(ErrorKind::IoFailure, "no <id>.jsonl + <id>.timeline.csv pairs in " + a.data->string());
    }
  } else {
    inputs.emplace_back(*a.session, *a.timeline);
  }

  std::vector<FeatureRow> rows;
  std::size_t dropped = 0;
  for (const auto& [session_path, timeline_path] : inputs) {
    const auto in = load_labeled(session_path, timeline_path);
    dropped += in.labeled.dropped;
    if (in.labeled.dropped > 0) {
      err << "featurize: " << in.session.participant_id << ": dropped " << in.labeled.dropped
          << " sample(s) outside every segment\n";
    }
    for (const auto& [emotion, fv] : featurize(in.labeled, conv)) {
      rows.push_back({in.session.participant_id, emotion, fv});
    }
  }
  emit(a.out, format_features_csv(rows), out);
  err << "featurize: " << rows.size() << " feature rows from " << inputs.size() << " session(s), "
      << dropped << " dropped sample(s)\n";
  return kExitOk;
}

// ------------------------------------------------------------------- trace

struct TraceArgs {
  fs::path session;
  fs::path timeline;
  std::optional<fs::path> out;
};

int cmd_trace(const TraceArgs& a, std::ostream& out, std::ostream&) {
  const auto in = load_labeled(a.session, a.timeline);
  emit(a.out, format_trace_csv(in.labeled), out);
  return kExitOk;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  fs::path features;
  fs::path traits;
  std::size_t k = learn::kDefaultFolds;
  std::uint64_t seed = 0;
  fs::path out;
  std::string aggregate_by = "resubstitution";
  std::vector<std::string> pool;
  std::size_t threads = 0;
};

std::vector<learn::ClassifierSpec> select_pool(const std::vector<std::string>& names, std::uint64_t seed) {
  const auto all = learn::default_pool(seed);
  if (names.empty()) return all;
  std::vector<learn::ClassifierSpec> pool;
  for (const auto& spec : all) {
    const auto name = learn::classifier_name(spec);
    if (std::find(names.begin(), names.end(), name) != names.end()) pool.push_back(spec);
  }
  for (const auto& n : names) {
    const bool known = std::any_of(all.begin(), all.end(),
                                   [&](const auto& s) { return learn::classifier_name(s) == n; });
    if (!known) throw UsageError("unknown classifier '" + n + "' in --pool");
  }
  return pool;
}

int cmd_train(const TrainArgs& a, std::ostream&, std::ostream& err) {
  TrainOptions options;
  options.k = a.k;
  options.seed = a.seed;
  options.pool = select_pool(a.pool, a.seed);
  options.aggregation = *parse_aggregation(a.aggregate_by);
  options.threads = a.threads;

  const auto cohort = join_cohort(read_features_csv(a.features), read_traits_csv(a.traits));
  const auto m = train_matrix(cohort, options);
  save_matrix(a.out, m);
  err << "train: " << m.grid.size() << " trait models + 1 emotion model for " << cohort.size()
      << " participants written to " << a.out.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  fs::path models;
  std::optional<fs::path> report;
  std::optional<fs::path> table;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&) {
  const auto m = load_matrix(a.models);
  if (a.report) write_text_file(*a.report, render_report(m).dump(2) + "\n");
  emit(a.table, render_table(m), out);
  return kExitOk;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
  fs::path models;
  fs::path session;
  fs::path timeline;
  std::optional<fs::path> out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream&) {
  const auto m = load_matrix(a.models);
  const auto in = load_labeled(a.session, a.timeline);
  const auto features = featurize(in.labeled);

  nlohmann::ordered_json doc;
  doc["participant_id"] = in.session.participant_id;
  doc["samples"] = in.session.samples.size();
  doc["dropped_samples"] = in.labeled.dropped;

  const auto best = best_per_trait(m);
  nlohmann::ordered_json traits = nlohmann::ordered_json::array();
  for (auto t : kAllTraits) {
    const auto& b = best.at(t);
    traits.push_back({{"trait", trait_name(t)},
                      {"value", predict_trait(m, features, t)},
                      {"emotion", emotion_name(b.emotion)},
                      {"classifier", b.cell->selection.best_name()}});
  }
  doc["traits"] = std::move(traits);

  nlohmann::ordered_json segments = nlohmann::ordered_json::array();
  for (const auto& [index, fv] : featurize_segments(in.labeled)) {
    const auto& seg = in.timeline.segments()[index];
    segments.push_back({{"index", index},
                        {"emotion", emotion_name(seg.emotion)},
                        {"start_ms", seg.start_ms},
                        {"end_ms", seg.end_ms},
                        {"predicted_emotion", emotion_name(predict_emotion(m, fv))}});
  }
  doc["segments"] = std::move(segments);
  emit(a.out, doc.dump(2) + "\n", out);
  return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Head-movement trait and emotion pipeline", "hm"};
  app.require_subcommand(1);

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Generate a seeded synthetic cohort");
  sim->add_option("--preset", simulate.preset, "strong | null")->capture_default_str();
  sim->add_option("--participants", simulate.participants, "Cohort size")->capture_default_str();
  sim->add_option("--seed", simulate.seed, "RNG seed")->required();
  sim->add_option("--period-ms", simulate.period_ms, "Sample period")->capture_default_str();
  sim->add_option("--out", simulate.out, "Output directory")->required();
  sim->add_option("--threads", simulate.threads, "Worker threads (0 = all cores)")->capture_default_str();

  ServeArgs serve;
  auto* srv = app.add_subcommand("serve-device", "Stream a session over TCP as wire packets");
  srv->add_option("--session", serve.session, "Session JSONL file")->required()->check(CLI::ExistingFile);
  srv->add_option("--host", serve.host, "Bind address")->capture_default_str();
  srv->add_option("--port", serve.port, "TCP port (0 = ephemeral)")->required();
  srv->add_option("--period-ms", serve.period_ms, "Pacing in --realtime mode")->capture_default_str();
  srv->add_flag("--realtime", serve.realtime, "Sleep one period between packets");
  srv->add_flag("--once", serve.once, "Exit after serving one client");
  srv->add_option("--port-file", serve.port_file, "Write the bound port to this file");
  serve.scale.add_to(*srv);

  CaptureArgs cap;
  auto* cp = app.add_subcommand("capture", "Record a TCP wire stream into a session file");
  cp->add_option("--host", cap.host, "Device address")->capture_default_str();
  cp->add_option("--port", cap.port, "Device port")->required();
  cp->add_option("--out", cap.out, "Session JSONL to write")->required();
  cp->add_option("--participant", cap.participant, "Participant id")->capture_default_str();
  cap.scale.add_to(*cp);

  FeaturizeArgs feat;
  auto* ft = app.add_subcommand("featurize", "Per-emotion magnitude moments as CSV");
  ft->add_option("--data", feat.data, "Directory of <id>.jsonl + <id>.timeline.csv")->check(CLI::ExistingDirectory);
  ft->add_option("--session", feat.session, "Single session file")->check(CLI::ExistingFile);
  ft->add_option("--timeline", feat.timeline, "Timeline for --session")->check(CLI::ExistingFile);
  ft->add_option("--out", feat.out, "Output CSV (default stdout)");
  ft->add_option("--std", feat.std_convention, "population | sample")
      ->check(CLI::IsMember({"population", "sample"}))
      ->capture_default_str();

  TraceArgs trace;
  auto* tr = app.add_subcommand("trace", "Per-sample magnitude CSV");
  tr->add_option("--session", trace.session, "Session file")->required()->check(CLI::ExistingFile);
  tr->add_option("--timeline", trace.timeline, "Timeline file")->required()->check(CLI::ExistingFile);
  tr->add_option("--out", trace.out, "Output CSV (default stdout)");

  TrainArgs train;
  auto* tn = app.add_subcommand("train", "Train the trait x emotion model matrix");
  tn->add_option("--features", train.features, "Features CSV")->required()->check(CLI::ExistingFile);
  tn->add_option("--traits", train.traits, "Traits CSV")->required()->check(CLI::ExistingFile);
  tn->add_option("--k", train.k, "Cross-validation folds")->capture_default_str()->check(CLI::Range(2, 1000));
  tn->add_option("--seed", train.seed, "RNG seed")->required();
  tn->add_option("--out", train.out, "Model directory")->required();
  tn->add_option("--aggregate-by", train.aggregate_by, "resubstitution | cv")
      ->check(CLI::IsMember({"resubstitution", "cv"}))
      ->capture_default_str();
  tn->add_option("--pool", train.pool, "Restrict the pool to these classifier families")->delimiter(',');
  tn->add_option("--threads", train.threads, "Worker threads (0 = all cores)")->capture_default_str();

  EvaluateArgs eval;
  auto* ev = app.add_subcommand("evaluate", "Render the report of a trained matrix");
  ev->add_option("--models", eval.models, "Model directory")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--report", eval.report, "Report JSON to write");
  ev->add_option("--table", eval.table, "Write the text table here instead of stdout");

  PredictArgs pred;
  auto* pd = app.add_subcommand("predict", "Predict traits and per-segment emotions for a session");
  pd->add_option("--models", pred.models, "Model directory")->required()->check(CLI::ExistingDirectory);
  pd->add_option("--session", pred.session, "Session file")->required()->check(CLI::ExistingFile);
  pd->add_option("--timeline", pred.timeline, "Timeline file")->required()->check(CLI::ExistingFile);
  pd->add_option("--out", pred.out, "Output JSON (default stdout)");

  const std::map<CLI::App*, std::function<int()>> handlers{
      {sim, [&] { return cmd_simulate(simulate, out, err); }},
      {srv, [&] { return cmd_serve(serve, out, err); }},
      {cp, [&] { return cmd_capture(cap, out, err); }},
      {ft, [&] { return cmd_featurize(feat, out, err); }},
      {tr, [&] { return cmd_trace(trace, out, err); }},
      {tn, [&] { return cmd_train(train, out, err); }},
      {ev, [&] { return cmd_evaluate(eval, out, err); }},
      {pd, [&] { return cmd_predict(pred, out, err); }},
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  for (const auto& [cmd, handler] : handlers) {
    if (!cmd->parsed()) continue;
    try {
      return handler();
    } catch (const UsageError& e) {
      err << "hm " << cmd->get_name() << ": " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "hm " << cmd->get_name() << ": " << e.what() << "\n";
      return kExitData;
    }
  }
  return kExitUsage;
}

} // namespace hm::cli
