#include <algorithm>
#include <limits>
#include <numeric>

#include "predictors.hpp"

namespace hm::learn::detail {

namespace {

class OneRulePredictor final : public Predictor {
public:
  OneRulePredictor(std::size_t feature, std::vector<double> cuts, std::vector<std::size_t> labels)
      : feature_(feature), cuts_(std::move(cuts)), labels_(std::move(labels)) {}

  std::size_t predict(const Features& x) const override {
    // Values equal to a cut fall in the lower interval.
    const auto it = std::lower_bound(cuts_.begin(), cuts_.end(), x[feature_]);
    return labels_[static_cast<std::size_t>(it - cuts_.begin())];
  }

  nlohmann::json to_json() const override {
    return {{"feature", feature_}, {"cuts", cuts_}, {"labels", labels_}};
  }

private:
  std::size_t feature_;
  std::vector<double> cuts_;        // ascending interval boundaries
  std::vector<std::size_t> labels_; // cuts_.size() + 1 entries
};

// Run of sorted rows that the partition never needs to split.
struct Group {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  std::size_t pure_label() const {
    std::size_t label = counts.size();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) continue;
      if (label != counts.size()) return counts.size();
      label = c;
    }
    return label;
  }
};

struct Rule {
  std::size_t correct = 0;
  std::vector<double> cuts;
  std::vector<std::size_t> labels;
};

std::vector<Group> build_groups(const Dataset& data, std::size_t feature) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.x(a)[feature] < data.x(b)[feature];
  });

  const auto k = data.num_classes();
  std::vector<Group> groups;
  for (auto i : order) {
    const double v = data.x(i)[feature];
    if (groups.empty() || groups.back().hi != v) {
      groups.push_back({v, v, std::vector<std::size_t>(k, 0)});
    }
    ++groups.back().counts[data.y(i)];
  }

  // Adjacent pure groups of one label are merged; an optimal partition never
  // cuts between them.
  std::vector<Group> merged;
  for (auto& g : groups) {
    if (!merged.empty()) {
      const auto a = merged.back().pure_label();
      if (a != k && a == g.pure_label()) {
        merged.back().hi = g.hi;
        for (std::size_t c = 0; c < k; ++c) merged.back().counts[c] += g.counts[c];
        continue;
      }
    }
    merged.push_back(std::move(g));
  }
  return merged;
}

Rule best_rule(const Dataset& data, std::size_t feature, std::size_t max_bins) {
  const auto groups = build_groups(data, feature);
  const auto g = groups.size();
  const auto k = data.num_classes();

  std::vector<std::vector<std::size_t>> cum(g + 1, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t c = 0; c < k; ++c) cum[i + 1][c] = cum[i][c] + groups[i].counts[c];
  }
  const auto interval = [&](std::size_t a, std::size_t b) {
    std::size_t best_c = 0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const auto n = cum[b][c] - cum[a][c];
      if (n > best) {
        best = n;
        best_c = c;
      }
    }
    return std::pair{best, best_c};
  };

  const auto bins = std::min(max_bins, g);
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  // score[j][b]: best correct count covering groups [0, b) with j intervals.
  std::vector<std::vector<std::size_t>> score(bins + 1, std::vector<std::size_t>(g + 1, kNone));
  std::vector<std::vector<std::size_t>> from(bins + 1, std::vector<std::size_t>(g + 1, 0));
  score[0][0] = 0;
  for (std::size_t j = 1; j <= bins; ++j) {
    for (std::size_t b = j; b <= g; ++b) {
      for (std::size_t a = j - 1; a < b; ++a) {
        if (score[j - 1][a] == kNone) continue;
        const auto s = score[j - 1][a] + interval(a, b).first;
        if (score[j][b] == kNone || s > score[j][b]) {
          score[j][b] = s;
          from[j][b] = a;
        }
      }
    }
  }

  std::size_t best_j = 1;
  for (std::size_t j = 2; j <= bins; ++j) {
    if (score[j][g] != kNone && score[j][g] > score[best_j][g]) best_j = j;
  }

  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t j = best_j, b = g; j > 0; --j) {
    const auto a = from[j][b];
    spans.emplace_back(a, b);
    b = a;
  }
  std::reverse(spans.begin(), spans.end());

  Rule rule;
  rule.correct = score[best_j][g];
  for (const auto& [a, b] : spans) {
    const auto label = interval(a, b).second;
    if (!rule.labels.empty() && rule.labels.back() == label) {
      continue;
    }
    if (!rule.labels.empty()) rule.cuts.push_back(0.5 * (groups[a - 1].hi + groups[a].lo));
    rule.labels.push_back(label);
  }
  return rule;
}

} // namespace

std::unique_ptr<Predictor> fit_one_rule(const OneRSpec& spec, const Dataset& data) {
  Rule best;
  std::size_t best_feature = 0;
  for (std::size_t f = 0; f < FeatureVector::kDims; ++f) {
    auto rule = best_rule(data, f, static_cast<std::size_t>(spec.bins));
    if (f == 0 || rule.correct > best.correct) {
      best = std::move(rule);
      best_feature = f;
    }
  }
  return std::make_unique<OneRulePredictor>(best_feature, std::move(best.cuts),
                                            std::move(best.labels));
}

std::unique_ptr<Predictor> one_rule_from_json(const nlohmann::json& j) {
  auto cuts = j.at("cuts").get<std::vector<double>>();
  auto labels = j.at("labels").get<std::vector<std::size_t>>();
  if (labels.size() != cuts.size() + 1) throw std::invalid_argument("OneR: labels/cuts mismatch");
  return std::make_unique<OneRulePredictor>(j.at("feature").get<std::size_t>(), std::move(cuts),
                                            std::move(labels));
}

} // namespace hm::learn::detail
