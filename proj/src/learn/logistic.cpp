#include <algorithm>
#include <cmath>

#include "predictors.hpp"

namespace hm::learn::detail {

namespace {

constexpr std::size_t kDims = FeatureVector::kDims;

// Row c holds the bias followed by one weight per feature.
using WeightRow = std::array<double, kDims + 1>;

std::vector<double> scores(const std::vector<WeightRow>& w, const Features& z) {
  std::vector<double> s(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    double v = w[c][0];
    for (std::size_t f = 0; f < kDims; ++f) v += w[c][f + 1] * z[f];
    s[c] = v;
  }
  return s;
}

void softmax_in_place(std::vector<double>& s) {
  const double mx = *std::max_element(s.begin(), s.end());
  double sum = 0.0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : s) v /= sum;
}

class LogisticPredictor final : public Predictor {
public:
  LogisticPredictor(Standardizer scaler, std::vector<WeightRow> weights)
      : scaler_(scaler), weights_(std::move(weights)) {}

  std::size_t predict(const Features& x) const override {
    const auto s = scores(weights_, scaler_.apply(x));
    return argmax_weight(s);
  }

  nlohmann::json to_json() const override {
    return {{"mean", features_to_json(scaler_.mean)},
            {"scale", features_to_json(scaler_.scale)},
            {"weights", weights_}};
  }

private:
  Standardizer scaler_;
  std::vector<WeightRow> weights_;
};

} // namespace

std::unique_ptr<Predictor> fit_logistic(const LogisticSpec& spec, const Dataset& data) {
  const auto scaler = Standardizer::fit(data);
  const auto n = data.size();
  const auto k = data.num_classes();
  std::vector<Features> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = scaler.apply(data.x(i));

  std::vector<WeightRow> w(k, WeightRow{});
  std::vector<WeightRow> grad(k);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    for (auto& g : grad) g.fill(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto p = scores(w, z[i]);
      softmax_in_place(p);
      for (std::size_t c = 0; c < k; ++c) {
        const double err = p[c] - (data.y(i) == c ? 1.0 : 0.0);
        grad[c][0] += err;
        for (std::size_t f = 0; f < kDims; ++f) grad[c][f + 1] += err * z[i][f];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      w[c][0] -= spec.learning_rate * grad[c][0] * inv_n;
      for (std::size_t f = 1; f <= kDims; ++f) {
        w[c][f] -= spec.learning_rate * (grad[c][f] * inv_n + spec.l2 * w[c][f]);
      }
    }
  }
  return std::make_unique<LogisticPredictor>(scaler, std::move(w));
}

std::unique_ptr<Predictor> logistic_from_json(const nlohmann::json& j) {
  Standardizer scaler{features_from_json(j.at("mean")), features_from_json(j.at("scale"))};
  auto weights = j.at("weights").get<std::vector<WeightRow>>();
  if (weights.empty()) throw std::invalid_argument("Logistic: no weights");
  return std::make_unique<LogisticPredictor>(scaler, std::move(weights));
}

} // namespace hm::learn::detail
