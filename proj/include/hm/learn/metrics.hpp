#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hm/learn/classifier.hpp"

namespace hm::learn {

// Counts indexed by (actual, predicted) over the model's label domain.
class ConfusionMatrix {
public:
  explicit ConfusionMatrix(std::vector<std::string> label_domain);

  const std::vector<std::string>& label_domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return domain_.size(); }

  std::size_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * domain_.size() + predicted];
  }
  void add(std::size_t actual, std::size_t predicted, std::size_t n = 1) {
    counts_[actual * domain_.size() + predicted] += n;
  }

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t support(std::size_t actual) const;      // row sum
  std::size_t predicted(std::size_t predicted) const; // column sum

  std::vector<std::vector<std::size_t>> rows() const;
  static ConfusionMatrix from_rows(std::vector<std::string> label_domain,
                                   const std::vector<std::vector<std::size_t>>& rows);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
  std::vector<std::string> domain_;
  std::vector<std::size_t> counts_;
};

// Throws LabelDomainMismatch when `data` has labels the model cannot emit.
ConfusionMatrix confusion(const Model& model, const Dataset& data);

// Support-weighted one-vs-rest averages. Precision and F1 are nullopt
// (rendered "NAN") when a class with support is never predicted.
struct MetricsReport {
  double accuracy = 0.0;
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  std::optional<double> precision;
  double recall = 0.0;
  std::optional<double> f1;
};

// Throws EmptyMatrix when the matrix holds no counts.
MetricsReport weighted_metrics(const ConfusionMatrix& cm);

} // namespace hm::learn
