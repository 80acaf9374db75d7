#include <cstdio>

#include "hm/matrix.hpp"

namespace hm {

namespace {

using ojson = nlohmann::ordered_json;

ojson metric(const std::optional<double>& v) {
  if (!v) return "NAN";
  return *v;
}

void add_cell_fields(ojson& row, const CellResult& c) {
  const auto& s = c.selection;
  row["classifier"] = s.best_name();
  row["classifier_spec"] = learn::describe(s.best_spec);
  row["accuracy_percent"] = 100.0 * s.resubstitution.value();
  row["accuracy_fraction"] = s.resubstitution.str();
  row["cv_success_rate"] = s.cv.success_rate();
  row["cv_fraction"] = s.cv.success.str();
  row["cv_folds"] = s.cv.folds;
  row["tp_rate"] = c.metrics.tp_rate;
  row["fp_rate"] = c.metrics.fp_rate;
  row["precision"] = metric(c.metrics.precision);
  row["recall"] = c.metrics.recall;
  row["f1"] = metric(c.metrics.f1);
  ojson candidates = ojson::array();
  for (const auto& cand : s.candidates) {
    candidates.push_back({{"classifier", learn::describe(cand.spec)},
                          {"cv_success_rate", cand.cv.value()},
                          {"cv_fraction", cand.cv.str()}});
  }
  row["candidates"] = std::move(candidates);
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * v);
  return buf;
}

std::string percent(const std::optional<double>& v) { return v ? percent(*v) : "NAN"; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

} // namespace

nlohmann::ordered_json render_report(const ModelMatrix& m) {
  ojson report;
  report["participants"] = m.participants;
  report["k"] = m.k;
  report["seed"] = m.seed;
  report["aggregation_key"] = aggregation_name(m.aggregation);

  ojson cells = ojson::array();
  for (auto t : kAllTraits) {
    for (auto e : kAllEmotions) {
      ojson row;
      row["trait"] = trait_name(t);
      row["emotion"] = emotion_name(e);
      add_cell_fields(row, m.cell(t, e));
      cells.push_back(std::move(row));
    }
  }
  report["cells"] = std::move(cells);

  ojson best = ojson::array();
  for (const auto& [t, b] : best_per_trait(m)) {
    ojson row;
    row["trait"] = trait_name(t);
    row["emotion"] = emotion_name(b.emotion);
    add_cell_fields(row, *b.cell);
    best.push_back(std::move(row));
  }
  report["best_per_trait"] = std::move(best);

  ojson emotion;
  emotion["target"] = "emotion";
  add_cell_fields(emotion, m.emotion_model);
  report["emotion_model"] = std::move(emotion);
  return report;
}

std::string render_table(const ModelMatrix& m) {
  const std::vector<std::string> header{"Predicted trait-Emotion", "Best classifier", "Accuracy(%)",
                                        "CV(%)",        "TP rate(%)",  "FP rate(%)",
                                        "Precision(%)", "Recall(%)",   "F-measure(%)"};
  std::vector<std::vector<std::string>> rows;
  const auto add = [&](std::string label, const CellResult& c) {
    rows.push_back({std::move(label), c.selection.best_name(),
                    percent(c.selection.resubstitution.value()),
                    percent(c.selection.cv.success_rate()), percent(c.metrics.tp_rate),
                    percent(c.metrics.fp_rate), percent(c.metrics.precision),
                    percent(c.metrics.recall), percent(c.metrics.f1)});
  };
  for (auto t : kAllTraits) {
    for (auto e : kAllEmotions) {
      add(std::string(trait_name(t)) + "-" + std::string(emotion_name(e)), m.cell(t, e));
    }
  }
  const auto cells_end = rows.size();
  for (const auto& [t, b] : best_per_trait(m)) {
    add(std::string(trait_name(t)) + "-" + std::string(emotion_name(b.emotion)) + " (best)", *b.cell);
  }
  const auto best_end = rows.size();
  add("Emotion", m.emotion_model);

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  const auto line = [&](const std::vector<std::string>& cols) {
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out += pad(cols[c], width[c]);
      out += c + 1 < cols.size() ? " | " : "\n";
    }
    return out;
  };
  std::size_t total_width = 0;
  for (auto w : width) total_width += w + 3;
  const std::string rule(total_width - 3, '-');

  std::string out = line(header) + rule + '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == cells_end || i == best_end) out += rule + '\n';
    out += line(rows[i]);
  }
  return out;
}

} // namespace hm
