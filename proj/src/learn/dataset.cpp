#include "hm/learn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hm/error.hpp"

namespace hm::learn {

Dataset::Dataset(std::vector<std::string> label_domain) : domain_(std::move(label_domain)) {
  std::set<std::string> seen(domain_.begin(), domain_.end());
  if (seen.size() != domain_.size()) {
    throw Error(ErrorKind::LabelDomainMismatch, "label domain contains duplicates");
  }
}

Dataset Dataset::from_rows(const std::vector<Row>& rows, std::vector<std::string> label_domain) {
  if (label_domain.empty()) {
    std::set<std::string> labels;
    for (const auto& r : rows) labels.insert(r.label);
    label_domain.assign(labels.begin(), labels.end());
  }
  Dataset d(std::move(label_domain));
  for (const auto& r : rows) d.add(r.features, r.label);
  return d;
}

std::size_t Dataset::label_index(std::string_view label) const {
  const auto it = std::find(domain_.begin(), domain_.end(), label);
  return it == domain_.end() ? npos : static_cast<std::size_t>(it - domain_.begin());
}

void Dataset::add(const FeatureVector& features, std::string_view label) {
  const auto idx = label_index(label);
  if (idx == npos) {
    throw Error(ErrorKind::LabelDomainMismatch, "label '" + std::string(label) + "' not in domain");
  }
  add(features.as_array(), idx);
}

void Dataset::add(const Features& features, std::size_t label_index) {
  if (label_index >= domain_.size()) {
    throw Error(ErrorKind::LabelDomainMismatch, "label index out of range");
  }
  x_.push_back(features);
  y_.push_back(label_index);
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(domain_.size(), 0);
  for (auto y : y_) ++counts[y];
  return counts;
}

std::size_t Dataset::distinct_labels_present() const {
  const auto counts = class_counts();
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset d;
  d.domain_ = domain_;
  d.x_.reserve(indices.size());
  d.y_.reserve(indices.size());
  for (auto i : indices) {
    d.x_.push_back(x_[i]);
    d.y_.push_back(y_[i]);
  }
  return d;
}

std::size_t argmax_count(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

std::size_t argmax_weight(std::span<const double> weights) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < weights.size(); ++c) {
    if (weights[c] > weights[best]) best = c;
  }
  return best;
}

Standardizer Standardizer::fit(const Dataset& data) {
  Standardizer s;
  const auto n = static_cast<double>(data.size());
  for (std::size_t f = 0; f < FeatureVector::kDims; ++f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) sum += data.x(i)[f];
    const double mean = data.empty() ? 0.0 : sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) ss += (data.x(i)[f] - mean) * (data.x(i)[f] - mean);
    const double sd = data.empty() ? 0.0 : std::sqrt(ss / n);
    s.mean[f] = mean;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Features Standardizer::apply(const Features& x) const {
  Features z;
  for (std::size_t f = 0; f < z.size(); ++f) z[f] = (x[f] - mean[f]) / scale[f];
  return z;
}

} // namespace hm::learn
