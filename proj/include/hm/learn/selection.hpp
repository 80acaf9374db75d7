#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hm/learn/classifier.hpp"
#include "hm/learn/metrics.hpp"

namespace hm::learn {

// correct / total, kept exact so accuracies like 39/40 stay auditable.
struct Fraction {
  std::size_t correct = 0;
  std::size_t total = 0;

  double value() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
  std::string str() const { return std::to_string(correct) + "/" + std::to_string(total); }

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Exact comparison of two fractions, a < b.
bool less(const Fraction& a, const Fraction& b);

struct CvResult {
  Fraction success;
  std::size_t folds = 0; // k actually used
  ConfusionMatrix pooled{{}};

  double success_rate() const { return success.value(); }
};

inline constexpr std::size_t kDefaultFolds = 5;

// Stratified k-fold assignment: each class is shuffled with `seed`, the
// classes are concatenated in domain order and dealt round-robin.
std::vector<std::size_t> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed);

// k is lowered to the smallest class count, but never below 2. Throws
// TooFewRows when the dataset cannot fill that many folds.
CvResult k_fold_cv(const ClassifierSpec& spec, const Dataset& data, std::size_t k, std::uint64_t seed);

struct CandidateScore {
  ClassifierSpec spec;
  Fraction cv;
};

struct SelectionResult {
  std::size_t best_index = 0; // position in the pool
  ClassifierSpec best_spec;
  Model best_model;
  CvResult cv;
  Fraction resubstitution;
  std::vector<CandidateScore> candidates;

  std::string best_name() const { return classifier_name(best_spec); }
};

// Highest pooled CV success wins; ties go to the earlier pool entry. The
// winner is refit on every row for the resubstitution score.
SelectionResult select_best(const Dataset& data, const std::vector<ClassifierSpec>& pool,
                            std::size_t k, std::uint64_t seed);

} // namespace hm::learn
