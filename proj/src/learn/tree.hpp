#pragma once

// CART tree shared by DecisionTree and RandomForest.

#include <cstdint>
#include <random>
#include <vector>

#include "hm/learn/dataset.hpp"
#include <json.hpp>

namespace hm::learn::detail {

struct TreeNode {
  int feature = -1; // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::size_t label = 0;
};

struct TreeParams {
  int max_depth = 6;
  int min_leaf = 1;
  int features_per_split = static_cast<int>(FeatureVector::kDims);
};

class Tree {
public:
  // `rows` may repeat indices (bootstrap). `rng` is only consulted when
  // features_per_split is below the feature count.
  static Tree grow(const Dataset& data, std::vector<std::size_t> rows, const TreeParams& params,
                   std::mt19937_64* rng);

  std::size_t predict(const Features& x) const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& j);

  std::size_t node_count() const noexcept { return nodes_.size(); }

private:
  std::vector<TreeNode> nodes_;
};

} // namespace hm::learn::detail
