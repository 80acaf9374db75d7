#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hm/learn/dataset.hpp"

namespace hm::learn {

// Rule learner on a single feature: the feature's sorted values are cut into
// at most `bins` intervals chosen to maximize training accuracy.
struct OneRSpec {
  int bins = 6;
  friend bool operator==(const OneRSpec&, const OneRSpec&) = default;
};

// k nearest neighbours on z-scored features.
struct KnnSpec {
  int k = 3;
  friend bool operator==(const KnnSpec&, const KnnSpec&) = default;
};

// CART with Gini impurity.
struct DecisionTreeSpec {
  int max_depth = 6;
  int min_leaf = 1;
  friend bool operator==(const DecisionTreeSpec&, const DecisionTreeSpec&) = default;
};

struct RandomForestSpec {
  int n_trees = 50;
  int max_depth = 8;
  int feature_subsample = 2;
  std::uint64_t seed = 1;
  friend bool operator==(const RandomForestSpec&, const RandomForestSpec&) = default;
};

// Multinomial logistic regression, full-batch gradient descent on z-scored features.
struct LogisticSpec {
  int epochs = 300;
  double learning_rate = 0.5;
  double l2 = 1e-3;
  friend bool operator==(const LogisticSpec&, const LogisticSpec&) = default;
};

// Multiclass AdaBoost (SAMME) over decision stumps.
struct AdaBoostStumpsSpec {
  int rounds = 50;
  friend bool operator==(const AdaBoostStumpsSpec&, const AdaBoostStumpsSpec&) = default;
};

using ClassifierSpec = std::variant<OneRSpec, KnnSpec, DecisionTreeSpec, RandomForestSpec,
                                    LogisticSpec, AdaBoostStumpsSpec>;

// Family name, e.g. "RandomForest".
std::string classifier_name(const ClassifierSpec& spec);
// Name with hyperparameters, e.g. "KNN(k=3)".
std::string describe(const ClassifierSpec& spec);

// Throws InvalidHyperparameters.
void validate(const ClassifierSpec& spec);

// The fixed selection pool, in tie-break order:
// OneR, KNN, DecisionTree, RandomForest, Logistic, AdaBoostStumps.
std::vector<ClassifierSpec> default_pool(std::uint64_t seed);

nlohmann::json spec_to_json(const ClassifierSpec& spec);
ClassifierSpec spec_from_json(const nlohmann::json& j);

namespace detail {

class Predictor {
public:
  virtual ~Predictor() = default;
  virtual std::size_t predict(const Features& x) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

} // namespace detail

// Immutable trained classifier. Cheap to copy.
class Model {
public:
  Model(ClassifierSpec spec, std::vector<std::string> label_domain,
        std::shared_ptr<const detail::Predictor> impl);

  const ClassifierSpec& spec() const noexcept { return spec_; }
  const std::vector<std::string>& label_domain() const noexcept { return domain_; }

  std::size_t predict_index(const Features& x) const { return impl_->predict(x); }
  const std::string& predict(const FeatureVector& x) const {
    return domain_[impl_->predict(x.as_array())];
  }

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& j);

private:
  ClassifierSpec spec_;
  std::vector<std::string> domain_;
  std::shared_ptr<const detail::Predictor> impl_;
};

// Throws DegenerateDataset when fewer than two labels have rows, and
// InvalidHyperparameters.
Model fit(const ClassifierSpec& spec, const Dataset& data);

// Predicts one label regardless of input.
Model constant_model(std::vector<std::string> label_domain, std::size_t label_index);

} // namespace hm::learn
