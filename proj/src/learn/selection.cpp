#include "hm/learn/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

#include "hm/error.hpp"

namespace hm::learn {

bool less(const Fraction& a, const Fraction& b) {
  // Row counts stay far below 2^32, so the products fit in 64 bits.
  return static_cast<std::uint64_t>(a.correct) * b.total < static_cast<std::uint64_t>(b.correct) * a.total;
}

std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.y(i)].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(data.size(), 0);
  std::size_t position = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) fold[i] = position++ % k;
  }
  return fold;
}

namespace {

std::size_t effective_folds(const Dataset& data, std::size_t k) {
  std::size_t min_count = data.size();
  for (auto c : data.class_counts()) {
    if (c > 0) min_count = std::min(min_count, c);
  }
  return std::max<std::size_t>(2, std::min(k, min_count));
}

} // namespace

CvResult k_fold_cv(const ClassifierSpec& spec, const Dataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::TooFewRows, "k must be at least 2");
  validate(spec);
  const auto folds = effective_folds(data, k);
  if (data.size() < folds) {
    throw Error(ErrorKind::TooFewRows, std::to_string(data.size()) + " row(s) cannot fill " +
                                           std::to_string(folds) + " folds");
  }

  const auto assignment = stratified_folds(data, folds, seed);
  CvResult result;
  result.folds = folds;
  result.pooled = ConfusionMatrix(data.label_domain());
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < data.size(); ++i) (assignment[i] == f ? test : train).push_back(i);
    const auto train_set = data.subset(train);

    // A fold whose training rows carry a single label can only predict it.
    const auto model = train_set.distinct_labels_present() < 2
                           ? constant_model(data.label_domain(), train_set.y(0))
                           : fit(spec, train_set);
    for (auto i : test) result.pooled.add(data.y(i), model.predict_index(data.x(i)));
  }
  result.success = {result.pooled.trace(), result.pooled.total()};
  return result;
}

SelectionResult select_best(const Dataset& data, const std::vector<ClassifierSpec>& pool,
                            std::size_t k, std::uint64_t seed) {
  if (pool.empty()) throw Error(ErrorKind::InvalidHyperparameters, "classifier pool is empty");

  std::vector<CvResult> runs;
  runs.reserve(pool.size());
  for (const auto& spec : pool) runs.push_back(k_fold_cv(spec, data, k, seed));

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (less(runs[best].success, runs[i].success)) best = i;
  }

  auto model = fit(pool[best], data);
  Fraction resub{0, data.size()};
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (model.predict_index(data.x(i)) == data.y(i)) ++resub.correct;
  }

  std::vector<CandidateScore> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) candidates.push_back({pool[i], runs[i].success});
  return {best, pool[best], std::move(model), std::move(runs[best]), resub, std::move(candidates)};
}

} // namespace hm::learn
