#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "predictors.hpp"

namespace hm::learn::detail {

namespace {

struct Stump {
  std::size_t feature = 0;
  double threshold = std::numeric_limits<double>::infinity(); // x <= threshold goes left
  std::size_t left = 0;
  std::size_t right = 0;
  double alpha = 1.0;

  std::size_t predict(const Features& x) const { return x[feature] <= threshold ? left : right; }
};

class AdaBoostPredictor final : public Predictor {
public:
  AdaBoostPredictor(std::size_t num_classes, std::vector<Stump> stumps)
      : num_classes_(num_classes), stumps_(std::move(stumps)) {}

  std::size_t predict(const Features& x) const override {
    std::vector<double> score(num_classes_, 0.0);
    for (const auto& s : stumps_) score[s.predict(x)] += s.alpha;
    return argmax_weight(score);
  }

  nlohmann::json to_json() const override {
    nlohmann::json stumps = nlohmann::json::array();
    for (const auto& s : stumps_) {
      nlohmann::json j{{"feature", s.feature}, {"left", s.left}, {"right", s.right}, {"alpha", s.alpha}};
      // JSON has no infinity; a missing threshold means "everything goes left".
      if (std::isfinite(s.threshold)) j["threshold"] = s.threshold;
      stumps.push_back(std::move(j));
    }
    return {{"classes", num_classes_}, {"stumps", stumps}};
  }

private:
  std::size_t num_classes_;
  std::vector<Stump> stumps_;
};

struct StumpFit {
  Stump stump;
  double error = 0.0;
};

StumpFit best_stump(const Dataset& data, const std::vector<double>& w) {
  const auto n = data.size();
  const auto k = data.num_classes();
  std::vector<double> total(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) total[data.y(i)] += w[i];
  const double mass = std::accumulate(total.begin(), total.end(), 0.0);

  StumpFit best;
  best.stump.left = best.stump.right = argmax_weight(total);
  best.error = mass - total[best.stump.left];

  std::vector<std::size_t> order(n);
  std::vector<double> left(k);
  for (std::size_t f = 0; f < FeatureVector::kDims; ++f) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data.x(a)[f] < data.x(b)[f]; });
    std::fill(left.begin(), left.end(), 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left[data.y(order[i])] += w[order[i]];
      const double v = data.x(order[i])[f];
      const double next = data.x(order[i + 1])[f];
      if (v == next) continue;
      std::size_t lbest = 0;
      std::size_t rbest = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (left[c] > left[lbest]) lbest = c;
        if (total[c] - left[c] > total[rbest] - left[rbest]) rbest = c;
      }
      const double err = mass - left[lbest] - (total[rbest] - left[rbest]);
      if (err < best.error - 1e-12) {
        best.error = err;
        best.stump = {f, 0.5 * (v + next), lbest, rbest, 1.0};
      }
    }
  }
  best.error = std::max(0.0, best.error / mass);
  return best;
}

} // namespace

std::unique_ptr<Predictor> fit_adaboost(const AdaBoostStumpsSpec& spec, const Dataset& data) {
  const auto n = data.size();
  const auto present = static_cast<double>(data.distinct_labels_present());
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<Stump> stumps;
  constexpr double kMinError = 1e-10;

  for (int round = 0; round < spec.rounds; ++round) {
    auto [stump, err] = best_stump(data, w);
    // SAMME: a weak learner must beat random guessing over the present classes.
    if (err >= 1.0 - 1.0 / present) {
      if (stumps.empty()) stumps.push_back(stump);
      break;
    }
    const double e = std::max(err, kMinError);
    stump.alpha = std::log((1.0 - e) / e) + std::log(present - 1.0);
    stumps.push_back(stump);
    if (err <= kMinError) break;

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (stump.predict(data.x(i)) != data.y(i)) w[i] *= std::exp(stump.alpha);
      sum += w[i];
    }
    for (auto& wi : w) wi /= sum;
  }
  return std::make_unique<AdaBoostPredictor>(data.num_classes(), std::move(stumps));
}

std::unique_ptr<Predictor> adaboost_from_json(const nlohmann::json& j) {
  std::vector<Stump> stumps;
  for (const auto& s : j.at("stumps")) {
    Stump st;
    st.feature = s.at("feature").get<std::size_t>();
    st.left = s.at("left").get<std::size_t>();
    st.right = s.at("right").get<std::size_t>();
    st.alpha = s.at("alpha").get<double>();
    if (s.contains("threshold")) st.threshold = s.at("threshold").get<double>();
    if (st.feature >= FeatureVector::kDims) throw std::invalid_argument("AdaBoost: bad feature");
    stumps.push_back(st);
  }
  if (stumps.empty()) throw std::invalid_argument("AdaBoost: no stumps");
  return std::make_unique<AdaBoostPredictor>(j.at("classes").get<std::size_t>(), std::move(stumps));
}

} // namespace hm::learn::detail
