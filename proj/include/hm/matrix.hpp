#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hm/features.hpp"
#include "hm/learn/selection.hpp"
#include "hm/traits.hpp"

namespace hm {

struct ParticipantFeatures {
  ParticipantRecord record;
  EmotionFeatures features;
};

using CohortFeatures = std::vector<ParticipantFeatures>;

// Joins feature rows to trait records by participant id, in record order.
// Participants without any feature rows are kept with an empty map so that
// training reports them as MissingEmotion.
CohortFeatures join_cohort(const std::vector<FeatureRow>& rows,
                           const std::vector<ParticipantRecord>& records);

// Which per-cell score decides the best emotion for a trait.
enum class AggregationKey { Resubstitution, CrossValidation };

std::string_view aggregation_name(AggregationKey key);
std::optional<AggregationKey> parse_aggregation(std::string_view name);

struct CellResult {
  learn::SelectionResult selection;
  learn::ConfusionMatrix confusion; // winner refit on all rows, scored on the same rows
  learn::MetricsReport metrics;
};

struct ModelMatrix {
  std::map<std::pair<TraitId, EmotionState>, CellResult> grid; // 35 cells
  CellResult emotion_model;
  std::vector<learn::ClassifierSpec> pool;
  std::size_t k = learn::kDefaultFolds;
  std::uint64_t seed = 0;
  AggregationKey aggregation = AggregationKey::Resubstitution;
  std::size_t participants = 0;

  const CellResult& cell(TraitId t, EmotionState e) const { return grid.at({t, e}); }
};

struct TrainOptions {
  std::size_t k = learn::kDefaultFolds;
  std::uint64_t seed = 0;
  std::vector<learn::ClassifierSpec> pool; // empty means learn::default_pool(seed)
  AggregationKey aggregation = AggregationKey::Resubstitution;
  std::size_t threads = 0; // 0 = hardware concurrency
};

// Dataset of cell (t, e): one row per participant, features from emotion e,
// labeled with the answer for t. Throws MissingEmotion, DegenerateTrait.
learn::Dataset trait_dataset(const CohortFeatures& cohort, TraitId t, EmotionState e);
// Every participant's five feature vectors labeled by emotion.
learn::Dataset emotion_dataset(const CohortFeatures& cohort);

// Trains the 7 x 5 trait grid plus the emotion model. The 36 selections run
// concurrently; results are keyed so the matrix is schedule-independent.
ModelMatrix train_matrix(const CohortFeatures& cohort, const TrainOptions& options);

// Argmax over emotions in the order Happy, Sad, Neutral, Surprise, Disgust;
// the earliest emotion wins ties.
EmotionState best_emotion(const std::array<learn::Fraction, kEmotionCount>& scores);

struct BestCell {
  EmotionState emotion;
  const CellResult* cell;
};

learn::Fraction aggregation_score(const CellResult& cell, AggregationKey key);

std::map<TraitId, BestCell> best_per_trait(const ModelMatrix& m);

// Throws MissingEmotionFeatures when the selected emotion is absent.
std::string predict_trait(const ModelMatrix& m, const EmotionFeatures& features, TraitId t);
EmotionState predict_emotion(const ModelMatrix& m, const FeatureVector& x);

nlohmann::json matrix_to_json(const ModelMatrix& m);
ModelMatrix matrix_from_json(const nlohmann::json& j);

// <dir>/matrix.json
void save_matrix(const std::filesystem::path& dir, const ModelMatrix& m);
ModelMatrix load_matrix(const std::filesystem::path& dir);

// Report document: cells[] (35), best_per_trait[] (7), emotion_model{}.
nlohmann::ordered_json render_report(const ModelMatrix& m);
// Aligned text mirroring the accuracy and weighted-metric tables.
std::string render_table(const ModelMatrix& m);

} // namespace hm
