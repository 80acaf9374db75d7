#pragma once

// Per-family training entry points. Each assumes a validated spec and a
// dataset with at least two labels present.

#include <memory>

#include "hm/learn/classifier.hpp"

namespace hm::learn::detail {

std::unique_ptr<Predictor> fit_one_rule(const OneRSpec& spec, const Dataset& data);
std::unique_ptr<Predictor> fit_knn(const KnnSpec& spec, const Dataset& data);
std::unique_ptr<Predictor> fit_decision_tree(const DecisionTreeSpec& spec, const Dataset& data);
std::unique_ptr<Predictor> fit_random_forest(const RandomForestSpec& spec, const Dataset& data);
std::unique_ptr<Predictor> fit_logistic(const LogisticSpec& spec, const Dataset& data);
std::unique_ptr<Predictor> fit_adaboost(const AdaBoostStumpsSpec& spec, const Dataset& data);

std::unique_ptr<Predictor> one_rule_from_json(const nlohmann::json& j);
std::unique_ptr<Predictor> knn_from_json(const nlohmann::json& j);
std::unique_ptr<Predictor> decision_tree_from_json(const nlohmann::json& j);
std::unique_ptr<Predictor> random_forest_from_json(const nlohmann::json& j);
std::unique_ptr<Predictor> logistic_from_json(const nlohmann::json& j);
std::unique_ptr<Predictor> adaboost_from_json(const nlohmann::json& j);

class ConstantPredictor final : public Predictor {
public:
  explicit ConstantPredictor(std::size_t label) : label_(label) {}
  std::size_t predict(const Features&) const override { return label_; }
  nlohmann::json to_json() const override { return {{"label", label_}}; }

private:
  std::size_t label_;
};

nlohmann::json features_to_json(const Features& f);
Features features_from_json(const nlohmann::json& j);

} // namespace hm::learn::detail
