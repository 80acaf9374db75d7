#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hm/features.hpp"

namespace hm::learn {

using Features = std::array<double, FeatureVector::kDims>;

struct Row {
  FeatureVector features;
  std::string label;
};

// Feature rows with labels stored as indices into an ordered label domain.
class Dataset {
public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> label_domain);

  // Domain defaults to the sorted distinct labels of `rows`.
  static Dataset from_rows(const std::vector<Row>& rows, std::vector<std::string> label_domain = {});

  // Throws LabelDomainMismatch for labels outside the domain.
  void add(const FeatureVector& features, std::string_view label);
  void add(const Features& features, std::size_t label_index);

  std::size_t size() const noexcept { return x_.size(); }
  bool empty() const noexcept { return x_.empty(); }
  const Features& x(std::size_t i) const { return x_[i]; }
  std::size_t y(std::size_t i) const { return y_[i]; }
  const std::string& label(std::size_t i) const { return domain_[y_[i]]; }
  const std::vector<std::string>& label_domain() const noexcept { return domain_; }
  std::size_t num_classes() const noexcept { return domain_.size(); }

  // Index of `label` in the domain, or npos.
  std::size_t label_index(std::string_view label) const;

  std::vector<std::size_t> class_counts() const;
  std::size_t distinct_labels_present() const;

  // Rows at `indices`, same label domain.
  Dataset subset(std::span<const std::size_t> indices) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::vector<std::string> domain_;
  std::vector<Features> x_;
  std::vector<std::size_t> y_;
};

// Index of the largest count; ties go to the lowest index.
std::size_t argmax_count(std::span<const std::size_t> counts);
std::size_t argmax_weight(std::span<const double> weights);

// z-score scaling fitted on one dataset and reused for prediction.
struct Standardizer {
  Features mean{};
  Features scale{};

  static Standardizer fit(const Dataset& data);
  Features apply(const Features& x) const;
};

} // namespace hm::learn
