#include "tree.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "predictors.hpp"

namespace hm::learn::detail {

namespace {

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class Builder {
public:
  Builder(const Dataset& data, const TreeParams& params, std::mt19937_64* rng,
          std::vector<TreeNode>& nodes)
      : data_(data), params_(params), rng_(rng), nodes_(nodes), k_(data.num_classes()) {}

  std::int32_t build(std::vector<std::size_t>& rows, int depth) {
    std::vector<std::size_t> counts(k_, 0);
    for (auto r : rows) ++counts[data_.y(r)];

    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].label = argmax_count(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || depth >= params_.max_depth ||
        rows.size() < 2 * static_cast<std::size_t>(params_.min_leaf)) {
      return id;
    }

    const auto split = best_split(rows, counts);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) {
      (data_.x(r)[split.feature] <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const auto l = build(left, depth + 1);
    const auto rt = build(right, depth + 1);
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    nodes_[id].left = l;
    nodes_[id].right = rt;
    return id;
  }

private:
  std::vector<int> candidate_features() {
    std::vector<int> features(FeatureVector::kDims);
    std::iota(features.begin(), features.end(), 0);
    const auto m = static_cast<std::size_t>(params_.features_per_split);
    if (rng_ != nullptr && m < features.size()) {
      // Partial Fisher-Yates: the first m entries become the sampled subset.
      for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, features.size() - 1);
        std::swap(features[i], features[pick(*rng_)]);
      }
      features.resize(m);
      std::sort(features.begin(), features.end());
    }
    return features;
  }

  Split best_split(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& counts) {
    const auto n = rows.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
    Split best;
    best.impurity = gini(counts, n);
    const double eps = 1e-12;

    std::vector<std::size_t> order(rows);
    std::vector<std::size_t> left(k_);
    std::vector<std::size_t> right(k_);
    for (int f : candidate_features()) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data_.x(a)[f] < data_.x(b)[f];
      });
      std::fill(left.begin(), left.end(), 0);
      right = counts;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto y = data_.y(order[i]);
        ++left[y];
        --right[y];
        const double v = data_.x(order[i])[f];
        const double next = data_.x(order[i + 1])[f];
        if (v == next) continue;
        const auto nl = i + 1;
        const auto nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double imp = (static_cast<double>(nl) * gini(left, nl) +
                            static_cast<double>(nr) * gini(right, nr)) /
                           static_cast<double>(n);
        if (imp < best.impurity - eps) {
          best.feature = f;
          best.threshold = 0.5 * (v + next);
          best.impurity = imp;
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const TreeParams& params_;
  std::mt19937_64* rng_;
  std::vector<TreeNode>& nodes_;
  std::size_t k_;
};

} // namespace

Tree Tree::grow(const Dataset& data, std::vector<std::size_t> rows, const TreeParams& params,
                std::mt19937_64* rng) {
  Tree t;
  Builder(data, params, rng, t.nodes_).build(rows, 0);
  return t;
}

std::size_t Tree::predict(const Features& x) const {
  std::int32_t id = 0;
  while (nodes_[id].feature >= 0) {
    const auto& n = nodes_[id];
    id = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[id].label;
}

nlohmann::json Tree::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (n.feature < 0) {
      out.push_back({{"label", n.label}});
    } else {
      out.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"label", n.label}});
    }
  }
  return out;
}

Tree Tree::from_json(const nlohmann::json& j) {
  Tree t;
  for (const auto& node : j) {
    TreeNode n;
    n.label = node.at("label").get<std::size_t>();
    if (node.contains("feature")) {
      n.feature = node.at("feature").get<int>();
      n.threshold = node.at("threshold").get<double>();
      n.left = node.at("left").get<std::int32_t>();
      n.right = node.at("right").get<std::int32_t>();
    }
    t.nodes_.push_back(n);
  }
  const auto size = static_cast<std::int32_t>(t.nodes_.size());
  for (const auto& n : t.nodes_) {
    if (n.feature >= static_cast<int>(FeatureVector::kDims) ||
        (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size))) {
      throw std::invalid_argument("tree: malformed node");
    }
  }
  if (t.nodes_.empty()) throw std::invalid_argument("tree: no nodes");
  return t;
}

namespace {

class DecisionTreePredictor final : public Predictor {
public:
  explicit DecisionTreePredictor(Tree tree) : tree_(std::move(tree)) {}
  std::size_t predict(const Features& x) const override { return tree_.predict(x); }
  nlohmann::json to_json() const override { return {{"nodes", tree_.to_json()}}; }

private:
  Tree tree_;
};

class RandomForestPredictor final : public Predictor {
public:
  RandomForestPredictor(std::size_t num_classes, std::vector<Tree> trees)
      : num_classes_(num_classes), trees_(std::move(trees)) {}

  std::size_t predict(const Features& x) const override {
    std::vector<std::size_t> votes(num_classes_, 0);
    for (const auto& t : trees_) ++votes[t.predict(x)];
    return argmax_count(votes);
  }

  nlohmann::json to_json() const override {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) trees.push_back(t.to_json());
    return {{"classes", num_classes_}, {"trees", trees}};
  }

private:
  std::size_t num_classes_;
  std::vector<Tree> trees_;
};

} // namespace

std::unique_ptr<Predictor> fit_decision_tree(const DecisionTreeSpec& spec, const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  TreeParams params{spec.max_depth, spec.min_leaf, static_cast<int>(FeatureVector::kDims)};
  return std::make_unique<DecisionTreePredictor>(Tree::grow(data, std::move(rows), params, nullptr));
}

std::unique_ptr<Predictor> fit_random_forest(const RandomForestSpec& spec, const Dataset& data) {
  std::mt19937_64 rng(spec.seed);
  TreeParams params{spec.max_depth, 1, spec.feature_subsample};
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(spec.n_trees));
  for (int t = 0; t < spec.n_trees; ++t) {
    std::vector<std::size_t> bootstrap(data.size());
    for (auto& r : bootstrap) r = pick(rng);
    trees.push_back(Tree::grow(data, std::move(bootstrap), params, &rng));
  }
  return std::make_unique<RandomForestPredictor>(data.num_classes(), std::move(trees));
}

std::unique_ptr<Predictor> decision_tree_from_json(const nlohmann::json& j) {
  return std::make_unique<DecisionTreePredictor>(Tree::from_json(j.at("nodes")));
}

std::unique_ptr<Predictor> random_forest_from_json(const nlohmann::json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
  return std::make_unique<RandomForestPredictor>(j.at("classes").get<std::size_t>(), std::move(trees));
}

} // namespace hm::learn::detail
