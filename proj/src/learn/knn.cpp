#include <algorithm>
#include <numeric>

#include "predictors.hpp"

namespace hm::learn::detail {

namespace {

class KnnPredictor final : public Predictor {
public:
  KnnPredictor(std::size_t k, std::size_t num_classes, Standardizer scaler,
               std::vector<Features> points, std::vector<std::size_t> labels)
      : k_(k), num_classes_(num_classes), scaler_(scaler), points_(std::move(points)),
        labels_(std::move(labels)) {}

  std::size_t predict(const Features& x) const override {
    const auto z = scaler_.apply(x);
    std::vector<std::pair<double, std::size_t>> dist(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double d = 0.0;
      for (std::size_t f = 0; f < z.size(); ++f) d += (z[f] - points_[i][f]) * (z[f] - points_[i][f]);
      dist[i] = {d, i};
    }
    const auto k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<std::size_t> votes(num_classes_, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[labels_[dist[i].second]];
    const auto top = *std::max_element(votes.begin(), votes.end());
    // Tied vote: the class of the nearest neighbour among the tied classes.
    for (std::size_t i = 0; i < k; ++i) {
      const auto label = labels_[dist[i].second];
      if (votes[label] == top) return label;
    }
    return 0;
  }

  nlohmann::json to_json() const override {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points_) pts.push_back(features_to_json(p));
    return {{"k", k_},
            {"classes", num_classes_},
            {"mean", features_to_json(scaler_.mean)},
            {"scale", features_to_json(scaler_.scale)},
            {"points", pts},
            {"labels", labels_}};
  }

private:
  std::size_t k_;
  std::size_t num_classes_;
  Standardizer scaler_;
  std::vector<Features> points_; // already standardized
  std::vector<std::size_t> labels_;
};

} // namespace

std::unique_ptr<Predictor> fit_knn(const KnnSpec& spec, const Dataset& data) {
  const auto scaler = Standardizer::fit(data);
  std::vector<Features> points;
  std::vector<std::size_t> labels;
  points.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    points.push_back(scaler.apply(data.x(i)));
    labels.push_back(data.y(i));
  }
  return std::make_unique<KnnPredictor>(static_cast<std::size_t>(spec.k), data.num_classes(), scaler,
                                        std::move(points), std::move(labels));
}

std::unique_ptr<Predictor> knn_from_json(const nlohmann::json& j) {
  Standardizer scaler{features_from_json(j.at("mean")), features_from_json(j.at("scale"))};
  std::vector<Features> points;
  for (const auto& p : j.at("points")) points.push_back(features_from_json(p));
  auto labels = j.at("labels").get<std::vector<std::size_t>>();
  if (labels.size() != points.size()) throw std::invalid_argument("KNN: labels/points mismatch");
  return std::make_unique<KnnPredictor>(j.at("k").get<std::size_t>(), j.at("classes").get<std::size_t>(),
                                        scaler, std::move(points), std::move(labels));
}

} // namespace hm::learn::detail
