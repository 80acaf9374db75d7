#include "hm/learn/metrics.hpp"

#include <algorithm>

#include "hm/error.hpp"

namespace hm::learn {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> label_domain)
    : domain_(std::move(label_domain)), counts_(domain_.size() * domain_.size(), 0) {}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += at(i, i);
  return t;
}

std::size_t ConfusionMatrix::support(std::size_t actual) const {
  std::size_t t = 0;
  for (std::size_t j = 0; j < size(); ++j) t += at(actual, j);
  return t;
}

std::size_t ConfusionMatrix::predicted(std::size_t predicted) const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += at(i, predicted);
  return t;
}

std::vector<std::vector<std::size_t>> ConfusionMatrix::rows() const {
  std::vector<std::vector<std::size_t>> out(size(), std::vector<std::size_t>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = at(i, j);
  }
  return out;
}

ConfusionMatrix ConfusionMatrix::from_rows(std::vector<std::string> label_domain,
                                           const std::vector<std::vector<std::size_t>>& rows) {
  ConfusionMatrix cm(std::move(label_domain));
  if (rows.size() != cm.size()) {
    throw Error(ErrorKind::LabelDomainMismatch, "confusion rows do not match label domain");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cm.size()) {
      throw Error(ErrorKind::LabelDomainMismatch, "confusion matrix must be square");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) cm.add(i, j, rows[i][j]);
  }
  return cm;
}

ConfusionMatrix confusion(const Model& model, const Dataset& data) {
  const auto& domain = model.label_domain();
  std::vector<std::size_t> to_model(data.num_classes());
  for (std::size_t c = 0; c < data.num_classes(); ++c) {
    const auto& name = data.label_domain()[c];
    const auto it = std::find(domain.begin(), domain.end(), name);
    if (it == domain.end()) {
      throw Error(ErrorKind::LabelDomainMismatch, "model cannot predict label '" + name + "'");
    }
    to_model[c] = static_cast<std::size_t>(it - domain.begin());
  }
  ConfusionMatrix cm(domain);
  for (std::size_t i = 0; i < data.size(); ++i) {
    cm.add(to_model[data.y(i)], model.predict_index(data.x(i)));
  }
  return cm;
}

MetricsReport weighted_metrics(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error(ErrorKind::EmptyMatrix, "confusion matrix has no counts");
  const auto n = static_cast<double>(total);

  MetricsReport r;
  r.accuracy = static_cast<double>(cm.trace()) / n;
  double precision = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;
  for (std::size_t c = 0; c < cm.size(); ++c) {
    const auto support = cm.support(c);
    if (support == 0) continue; // zero weight
    const double weight = static_cast<double>(support) / n;
    const auto tp = static_cast<double>(cm.at(c, c));
    const auto predicted = cm.predicted(c);
    const auto negatives = total - support;

    const double tpr = tp / static_cast<double>(support);
    const double fpr = negatives == 0 ? 0.0 : (static_cast<double>(predicted) - tp) / static_cast<double>(negatives);
    r.tp_rate += weight * tpr;
    r.fp_rate += weight * fpr;
    r.recall += weight * tpr;

    if (predicted == 0) {
      precision_defined = false;
      continue;
    }
    const double prec = tp / static_cast<double>(predicted);
    precision += weight * prec;
    f1 += weight * (prec + tpr > 0.0 ? 2.0 * prec * tpr / (prec + tpr) : 0.0);
  }
  if (precision_defined) {
    r.precision = precision;
    r.f1 = f1;
  }
  return r;
}

} // namespace hm::learn
