#include "hm/learn/classifier.hpp"

#include <cmath>

#include "hm/error.hpp"
#include "predictors.hpp"

namespace hm::learn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidHyperparameters, what);
}

std::string fmt(double v) {
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

} // namespace

std::string classifier_name(const ClassifierSpec& spec) {
  return std::visit(overloaded{
                        [](const OneRSpec&) { return std::string("OneR"); },
                        [](const KnnSpec&) { return std::string("KNN"); },
                        [](const DecisionTreeSpec&) { return std::string("DecisionTree"); },
                        [](const RandomForestSpec&) { return std::string("RandomForest"); },
                        [](const LogisticSpec&) { return std::string("Logistic"); },
                        [](const AdaBoostStumpsSpec&) { return std::string("AdaBoostStumps"); },
                    },
                    spec);
}

std::string describe(const ClassifierSpec& spec) {
  return std::visit(
      overloaded{
          [](const OneRSpec& s) { return "OneR(bins=" + std::to_string(s.bins) + ")"; },
          [](const KnnSpec& s) { return "KNN(k=" + std::to_string(s.k) + ")"; },
          [](const DecisionTreeSpec& s) {
            return "DecisionTree(max_depth=" + std::to_string(s.max_depth) +
                   ",min_leaf=" + std::to_string(s.min_leaf) + ")";
          },
          [](const RandomForestSpec& s) {
            return "RandomForest(n_trees=" + std::to_string(s.n_trees) +
                   ",max_depth=" + std::to_string(s.max_depth) +
                   ",feature_subsample=" + std::to_string(s.feature_subsample) +
                   ",seed=" + std::to_string(s.seed) + ")";
          },
          [](const LogisticSpec& s) {
            return "Logistic(epochs=" + std::to_string(s.epochs) +
                   ",learning_rate=" + fmt(s.learning_rate) + ",l2=" + fmt(s.l2) + ")";
          },
          [](const AdaBoostStumpsSpec& s) {
            return "AdaBoostStumps(rounds=" + std::to_string(s.rounds) + ")";
          },
      },
      spec);
}

void validate(const ClassifierSpec& spec) {
  std::visit(overloaded{
                 [](const OneRSpec& s) { require(s.bins >= 1, "OneR bins must be >= 1"); },
                 [](const KnnSpec& s) { require(s.k >= 1, "KNN k must be >= 1"); },
                 [](const DecisionTreeSpec& s) {
                   require(s.max_depth >= 1, "DecisionTree max_depth must be >= 1");
                   require(s.min_leaf >= 1, "DecisionTree min_leaf must be >= 1");
                 },
                 [](const RandomForestSpec& s) {
                   require(s.n_trees >= 1, "RandomForest n_trees must be >= 1");
                   require(s.max_depth >= 1, "RandomForest max_depth must be >= 1");
                   require(s.feature_subsample >= 1 &&
                               s.feature_subsample <= static_cast<int>(FeatureVector::kDims),
                           "RandomForest feature_subsample must be in [1, 4]");
                 },
                 [](const LogisticSpec& s) {
                   require(s.epochs >= 1, "Logistic epochs must be >= 1");
                   require(std::isfinite(s.learning_rate) && s.learning_rate > 0.0,
                           "Logistic learning_rate must be > 0");
                   require(std::isfinite(s.l2) && s.l2 >= 0.0, "Logistic l2 must be >= 0");
                 },
                 [](const AdaBoostStumpsSpec& s) {
                   require(s.rounds >= 1, "AdaBoostStumps rounds must be >= 1");
                 },
             },
             spec);
}

std::vector<ClassifierSpec> default_pool(std::uint64_t seed) {
  return {
      OneRSpec{6},
      KnnSpec{3},
      DecisionTreeSpec{6, 1},
      RandomForestSpec{50, 8, 2, seed},
      LogisticSpec{300, 0.5, 1e-3},
      AdaBoostStumpsSpec{50},
  };
}

nlohmann::json spec_to_json(const ClassifierSpec& spec) {
  using nlohmann::json;
  return std::visit(
      overloaded{
          [](const OneRSpec& s) { return json{{"type", "OneR"}, {"bins", s.bins}}; },
          [](const KnnSpec& s) { return json{{"type", "KNN"}, {"k", s.k}}; },
          [](const DecisionTreeSpec& s) {
            return json{{"type", "DecisionTree"}, {"max_depth", s.max_depth}, {"min_leaf", s.min_leaf}};
          },
          [](const RandomForestSpec& s) {
            return json{{"type", "RandomForest"},
                        {"n_trees", s.n_trees},
                        {"max_depth", s.max_depth},
                        {"feature_subsample", s.feature_subsample},
                        {"seed", s.seed}};
          },
          [](const LogisticSpec& s) {
            return json{{"type", "Logistic"},
                        {"epochs", s.epochs},
                        {"learning_rate", s.learning_rate},
                        {"l2", s.l2}};
          },
          [](const AdaBoostStumpsSpec& s) {
            return json{{"type", "AdaBoostStumps"}, {"rounds", s.rounds}};
          },
      },
      spec);
}

ClassifierSpec spec_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "OneR") return OneRSpec{j.at("bins").get<int>()};
  if (type == "KNN") return KnnSpec{j.at("k").get<int>()};
  if (type == "DecisionTree") {
    return DecisionTreeSpec{j.at("max_depth").get<int>(), j.at("min_leaf").get<int>()};
  }
  if (type == "RandomForest") {
    return RandomForestSpec{j.at("n_trees").get<int>(), j.at("max_depth").get<int>(),
                            j.at("feature_subsample").get<int>(), j.at("seed").get<std::uint64_t>()};
  }
  if (type == "Logistic") {
    return LogisticSpec{j.at("epochs").get<int>(), j.at("learning_rate").get<double>(),
                        j.at("l2").get<double>()};
  }
  if (type == "AdaBoostStumps") return AdaBoostStumpsSpec{j.at("rounds").get<int>()};
  throw Error(ErrorKind::InvalidHyperparameters, "unknown classifier type '" + type + "'");
}

Model::Model(ClassifierSpec spec, std::vector<std::string> label_domain,
             std::shared_ptr<const detail::Predictor> impl)
    : spec_(std::move(spec)), domain_(std::move(label_domain)), impl_(std::move(impl)) {}

nlohmann::json Model::to_json() const {
  return {{"spec", spec_to_json(spec_)}, {"labels", domain_}, {"params", impl_->to_json()}};
}

Model Model::from_json(const nlohmann::json& j) {
  auto spec = spec_from_json(j.at("spec"));
  auto labels = j.at("labels").get<std::vector<std::string>>();
  const auto& params = j.at("params");
  std::shared_ptr<const detail::Predictor> impl;
  if (params.size() == 1 && params.contains("label")) {
    impl = std::make_shared<detail::ConstantPredictor>(params.at("label").get<std::size_t>());
  } else {
    impl = std::visit(overloaded{
                          [&](const OneRSpec&) { return detail::one_rule_from_json(params); },
                          [&](const KnnSpec&) { return detail::knn_from_json(params); },
                          [&](const DecisionTreeSpec&) { return detail::decision_tree_from_json(params); },
                          [&](const RandomForestSpec&) { return detail::random_forest_from_json(params); },
                          [&](const LogisticSpec&) { return detail::logistic_from_json(params); },
                          [&](const AdaBoostStumpsSpec&) { return detail::adaboost_from_json(params); },
                      },
                      spec);
  }
  return Model(std::move(spec), std::move(labels), std::move(impl));
}

Model fit(const ClassifierSpec& spec, const Dataset& data) {
  validate(spec);
  if (data.distinct_labels_present() < 2) {
    throw Error(ErrorKind::DegenerateDataset,
                "need rows for at least two labels, got " +
                    std::to_string(data.distinct_labels_present()));
  }
  std::unique_ptr<detail::Predictor> impl =
      std::visit(overloaded{
                     [&](const OneRSpec& s) { return detail::fit_one_rule(s, data); },
                     [&](const KnnSpec& s) { return detail::fit_knn(s, data); },
                     [&](const DecisionTreeSpec& s) { return detail::fit_decision_tree(s, data); },
                     [&](const RandomForestSpec& s) { return detail::fit_random_forest(s, data); },
                     [&](const LogisticSpec& s) { return detail::fit_logistic(s, data); },
                     [&](const AdaBoostStumpsSpec& s) { return detail::fit_adaboost(s, data); },
                 },
                 spec);
  return Model(spec, data.label_domain(), std::move(impl));
}

Model constant_model(std::vector<std::string> label_domain, std::size_t label_index) {
  return Model(OneRSpec{1}, std::move(label_domain),
               std::make_shared<detail::ConstantPredictor>(label_index));
}

namespace detail {

nlohmann::json features_to_json(const Features& f) { return nlohmann::json(f); }

Features features_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != FeatureVector::kDims) {
    throw Error(ErrorKind::MalformedLine, "feature array must have 4 entries");
  }
  return {v[0], v[1], v[2], v[3]};
}

} // namespace detail

} // namespace hm::learn
