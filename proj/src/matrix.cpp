#include "hm/matrix.hpp"

#include <optional>
#include <set>

#include "hm/error.hpp"
#include "hm/parallel.hpp"
#include "hm/session.hpp"

namespace hm {

using learn::Dataset;
using learn::Fraction;

CohortFeatures join_cohort(const std::vector<FeatureRow>& rows,
                           const std::vector<ParticipantRecord>& records) {
  std::map<std::string, EmotionFeatures> by_id;
  for (const auto& r : rows) {
    if (!by_id[r.participant_id].emplace(r.emotion, r.features).second) {
      throw Error(ErrorKind::MalformedRow, "duplicate features for " + r.participant_id + "/" +
                                               std::string(emotion_name(r.emotion)));
    }
  }
  CohortFeatures cohort;
  for (const auto& rec : records) {
    auto it = by_id.find(rec.id);
    cohort.push_back({rec, it == by_id.end() ? EmotionFeatures{} : it->second});
  }
  return cohort;
}

std::string_view aggregation_name(AggregationKey key) {
  return key == AggregationKey::Resubstitution ? "resubstitution" : "cv";
}

std::optional<AggregationKey> parse_aggregation(std::string_view name) {
  if (name == "resubstitution") return AggregationKey::Resubstitution;
  if (name == "cv") return AggregationKey::CrossValidation;
  return std::nullopt;
}

namespace {

void require_all_emotions(const CohortFeatures& cohort) {
  for (const auto& p : cohort) {
    for (auto e : kAllEmotions) {
      if (!p.features.contains(e)) {
        throw Error(ErrorKind::MissingEmotion,
                    p.record.id + " has no " + std::string(emotion_name(e)) + " features");
      }
    }
  }
}

CellResult make_cell(learn::SelectionResult selection, const Dataset& data) {
  auto cm = learn::confusion(selection.best_model, data);
  auto metrics = learn::weighted_metrics(cm);
  return {std::move(selection), std::move(cm), metrics};
}

} // namespace

Dataset trait_dataset(const CohortFeatures& cohort, TraitId t, EmotionState e) {
  require_all_emotions(cohort);
  std::set<std::string> present;
  for (const auto& p : cohort) {
    const auto it = p.record.answers.find(t);
    if (it == p.record.answers.end()) {
      throw Error(ErrorKind::MalformedRow,
                  p.record.id + " did not answer " + std::string(trait_name(t)));
    }
    present.insert(it->second);
  }
  if (present.size() < 2) {
    throw Error(ErrorKind::DegenerateTrait,
                std::string(trait_name(t)) + " has a single answer across the cohort");
  }
  std::vector<std::string> domain;
  for (const auto& v : trait_domain(t)) {
    if (present.contains(v)) domain.push_back(v);
  }
  Dataset data(domain);
  for (const auto& p : cohort) data.add(p.features.at(e), p.record.answers.at(t));
  return data;
}

Dataset emotion_dataset(const CohortFeatures& cohort) {
  require_all_emotions(cohort);
  std::vector<std::string> domain;
  for (auto e : kAllEmotions) domain.emplace_back(emotion_name(e));
  Dataset data(domain);
  for (const auto& p : cohort) {
    for (auto e : kAllEmotions) data.add(p.features.at(e).as_array(), emotion_index(e));
  }
  return data;
}

ModelMatrix train_matrix(const CohortFeatures& cohort, const TrainOptions& options) {
  require_all_emotions(cohort);
  const auto pool = options.pool.empty() ? learn::default_pool(options.seed) : options.pool;

  // Build every dataset up front so validation errors surface before any
  // training starts.
  std::vector<Dataset> datasets;
  datasets.reserve(kTraitCount * kEmotionCount + 1);
  for (auto t : kAllTraits) {
    for (auto e : kAllEmotions) datasets.push_back(trait_dataset(cohort, t, e));
  }
  datasets.push_back(emotion_dataset(cohort));

  std::vector<std::optional<CellResult>> results(datasets.size());
  parallel_for(datasets.size(), options.threads, [&](std::size_t i) {
    auto selection = learn::select_best(datasets[i], pool, options.k, options.seed);
    results[i] = make_cell(std::move(selection), datasets[i]);
  });

  std::map<std::pair<TraitId, EmotionState>, CellResult> grid;
  for (std::size_t ti = 0; ti < kTraitCount; ++ti) {
    for (std::size_t ei = 0; ei < kEmotionCount; ++ei) {
      grid.emplace(std::pair{kAllTraits[ti], kAllEmotions[ei]},
                   std::move(*results[ti * kEmotionCount + ei]));
    }
  }
  return ModelMatrix{std::move(grid), std::move(*results.back()), pool,           options.k,
                     options.seed,    options.aggregation,        cohort.size()};
}

EmotionState best_emotion(const std::array<Fraction, kEmotionCount>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kEmotionCount; ++i) {
    if (learn::less(scores[best], scores[i])) best = i;
  }
  return kAllEmotions[best];
}

Fraction aggregation_score(const CellResult& cell, AggregationKey key) {
  return key == AggregationKey::Resubstitution ? cell.selection.resubstitution
                                               : cell.selection.cv.success;
}

std::map<TraitId, BestCell> best_per_trait(const ModelMatrix& m) {
  std::map<TraitId, BestCell> out;
  for (auto t : kAllTraits) {
    std::array<Fraction, kEmotionCount> scores;
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      scores[i] = aggregation_score(m.cell(t, kAllEmotions[i]), m.aggregation);
    }
    const auto e = best_emotion(scores);
    out.emplace(t, BestCell{e, &m.cell(t, e)});
  }
  return out;
}

std::string predict_trait(const ModelMatrix& m, const EmotionFeatures& features, TraitId t) {
  const auto best = best_per_trait(m).at(t);
  const auto it = features.find(best.emotion);
  if (it == features.end()) {
    throw Error(ErrorKind::MissingEmotionFeatures,
                std::string(trait_name(t)) + " is predicted from " +
                    std::string(emotion_name(best.emotion)) + " features, which are absent");
  }
  return best.cell->selection.best_model.predict(it->second);
}

EmotionState predict_emotion(const ModelMatrix& m, const FeatureVector& x) {
  const auto& label = m.emotion_model.selection.best_model.predict(x);
  return *parse_emotion(label);
}

namespace {

using nlohmann::json;

json fraction_json(const Fraction& f) { return {f.correct, f.total}; }
Fraction fraction_from_json(const json& j) {
  return {j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()};
}

json cell_to_json(const CellResult& c) {
  const auto& s = c.selection;
  json candidates = json::array();
  for (const auto& cand : s.candidates) {
    candidates.push_back({{"spec", learn::spec_to_json(cand.spec)}, {"cv", fraction_json(cand.cv)}});
  }
  return {{"best_index", s.best_index},
          {"cv", {{"success", fraction_json(s.cv.success)},
                  {"folds", s.cv.folds},
                  {"pooled", s.cv.pooled.rows()}}},
          {"resubstitution", fraction_json(s.resubstitution)},
          {"candidates", candidates},
          {"model", s.best_model.to_json()},
          {"confusion", c.confusion.rows()}};
}

CellResult cell_from_json(const json& j) {
  auto model = learn::Model::from_json(j.at("model"));
  const auto& domain = model.label_domain();

  std::vector<learn::CandidateScore> candidates;
  for (const auto& cand : j.at("candidates")) {
    candidates.push_back({learn::spec_from_json(cand.at("spec")), fraction_from_json(cand.at("cv"))});
  }
  const auto best_index = j.at("best_index").get<std::size_t>();
  if (best_index >= candidates.size()) throw std::invalid_argument("best_index out of range");

  learn::CvResult cv;
  cv.success = fraction_from_json(j.at("cv").at("success"));
  cv.folds = j.at("cv").at("folds").get<std::size_t>();
  cv.pooled = learn::ConfusionMatrix::from_rows(
      domain, j.at("cv").at("pooled").get<std::vector<std::vector<std::size_t>>>());

  auto cm = learn::ConfusionMatrix::from_rows(
      domain, j.at("confusion").get<std::vector<std::vector<std::size_t>>>());
  auto metrics = learn::weighted_metrics(cm);
  learn::SelectionResult selection{best_index,
                                   candidates[best_index].spec,
                                   std::move(model),
                                   std::move(cv),
                                   fraction_from_json(j.at("resubstitution")),
                                   std::move(candidates)};
  return {std::move(selection), std::move(cm), metrics};
}

constexpr std::string_view kFormat = "hm-model-matrix";
constexpr int kVersion = 1;

} // namespace

nlohmann::json matrix_to_json(const ModelMatrix& m) {
  json pool = json::array();
  for (const auto& spec : m.pool) pool.push_back(learn::spec_to_json(spec));
  json cells = json::array();
  for (auto t : kAllTraits) {
    for (auto e : kAllEmotions) {
      auto c = cell_to_json(m.cell(t, e));
      c["trait"] = trait_name(t);
      c["emotion"] = emotion_name(e);
      cells.push_back(std::move(c));
    }
  }
  return {{"format", kFormat},
          {"version", kVersion},
          {"k", m.k},
          {"seed", m.seed},
          {"aggregation", aggregation_name(m.aggregation)},
          {"participants", m.participants},
          {"pool", pool},
          {"cells", cells},
          {"emotion_model", cell_to_json(m.emotion_model)}};
}

ModelMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != kVersion) {
      throw std::invalid_argument("unsupported model file format");
    }
    std::vector<learn::ClassifierSpec> pool;
    for (const auto& s : j.at("pool")) pool.push_back(learn::spec_from_json(s));

    std::map<std::pair<TraitId, EmotionState>, CellResult> grid;
    for (const auto& c : j.at("cells")) {
      std::optional<TraitId> trait;
      for (auto t : kAllTraits) {
        if (c.at("trait").get<std::string>() == trait_name(t)) trait = t;
      }
      const auto emotion = parse_emotion(c.at("emotion").get<std::string>());
      if (!trait || !emotion) throw std::invalid_argument("unknown trait or emotion in cell");
      if (!grid.emplace(std::pair{*trait, *emotion}, cell_from_json(c)).second) {
        throw std::invalid_argument("duplicate cell");
      }
    }
    if (grid.size() != kTraitCount * kEmotionCount) {
      throw std::invalid_argument("model file must hold 35 cells");
    }
    const auto aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
    if (!aggregation) throw std::invalid_argument("unknown aggregation key");
    return ModelMatrix{std::move(grid),
                       cell_from_json(j.at("emotion_model")),
                       std::move(pool),
                       j.at("k").get<std::size_t>(),
                       j.at("seed").get<std::uint64_t>(),
                       *aggregation,
                       j.at("participants").get<std::size_t>()};
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("model file: ") + e.what());
  }
}

void save_matrix(const std::filesystem::path& dir, const ModelMatrix& m) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "matrix.json", matrix_to_json(m).dump() + "\n");
}

ModelMatrix load_matrix(const std::filesystem::path& dir) {
  const auto text = read_text_file(dir / "matrix.json");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("model file: ") + e.what());
  }
  return matrix_from_json(j);
}

} // namespace hm
