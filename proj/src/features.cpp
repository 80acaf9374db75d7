#include "hm/features.hpp"

#include <cmath>
#include <string>

#include "hm/error.hpp"
#include "strings.hpp"

namespace hm {

double magnitude(const Vec3& v) { return std::hypot(v.x, v.y, v.z); }

Moments moments(std::span<const double> series, StdConvention conv) {
  if (series.empty()) throw Error(ErrorKind::EmptySeries, "moments of an empty series");
  const auto n = static_cast<double>(series.size());
  double sum = 0.0;
  for (double v : series) sum += v;
  const double mean = sum / n;

  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  double denom = n;
  if (conv == StdConvention::Sample) {
    if (series.size() < 2) throw Error(ErrorKind::EmptySeries, "sample std needs two values");
    denom = n - 1.0;
  }
  return {mean, std::sqrt(ss / denom)};
}

namespace {

struct MagnitudeSeries {
  std::vector<double> acc;
  std::vector<double> gyro;
};

FeatureVector to_features(const MagnitudeSeries& m, StdConvention conv) {
  const auto a = moments(m.acc, conv);
  const auto g = moments(m.gyro, conv);
  return {a.mean, a.std, g.mean, g.std};
}

} // namespace

EmotionFeatures featurize(const LabeledSession& session, StdConvention conv) {
  std::map<EmotionState, MagnitudeSeries> series;
  for (const auto& ls : session.labeled) {
    auto& m = series[ls.emotion];
    m.acc.push_back(magnitude(ls.sample.acc));
    m.gyro.push_back(magnitude(ls.sample.gyro));
  }
  EmotionFeatures out;
  for (const auto& [emotion, m] : series) {
    if (m.acc.size() < kMinSamplesPerEmotion) {
      throw Error(ErrorKind::InsufficientSamples,
                  std::string(emotion_name(emotion)) + " has " + std::to_string(m.acc.size()) +
                      " sample(s) in " + session.participant_id);
    }
    out.emplace(emotion, to_features(m, conv));
  }
  return out;
}

std::map<std::size_t, FeatureVector> featurize_segments(const LabeledSession& session,
                                                        StdConvention conv) {
  std::map<std::size_t, MagnitudeSeries> series;
  for (const auto& ls : session.labeled) {
    auto& m = series[ls.segment];
    m.acc.push_back(magnitude(ls.sample.acc));
    m.gyro.push_back(magnitude(ls.sample.gyro));
  }
  std::map<std::size_t, FeatureVector> out;
  for (const auto& [segment, m] : series) {
    if (m.acc.size() < kMinSamplesPerEmotion) {
      throw Error(ErrorKind::InsufficientSamples,
                  "segment " + std::to_string(segment) + " has " + std::to_string(m.acc.size()) +
                      " sample(s) in " + session.participant_id);
    }
    out.emplace(segment, to_features(m, conv));
  }
  return out;
}

} // namespace hm

namespace hm {

namespace {
constexpr std::string_view kFeaturesHeader =
    "participant_id,emotion,acc_mag_mean,acc_mag_std,gyro_mag_mean,gyro_mag_std";
}

std::string format_features_csv(const std::vector<FeatureRow>& rows) {
  using detail::format_double;
  std::string out(kFeaturesHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.participant_id;
    out += ',';
    out += emotion_name(r.emotion);
    for (double v : r.features.as_array()) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureRow> parse_features_csv(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty() || detail::trim(rows[0]) != kFeaturesHeader) {
    throw Error(ErrorKind::MalformedRow, "features header must be: " + std::string(kFeaturesHeader));
  }
  std::vector<FeatureRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (detail::trim(rows[i]).empty()) continue;
    const auto where = "features line " + std::to_string(i + 1);
    const auto cols = detail::split(rows[i], ',');
    if (cols.size() != 6) throw Error(ErrorKind::MalformedRow, where + ": expected 6 columns");
    FeatureRow row;
    row.participant_id = std::string(detail::trim(cols[0]));
    const auto emotion = parse_emotion(cols[1]);
    if (!emotion) {
      throw Error(ErrorKind::UnknownEmotion, where + ": '" + std::string(detail::trim(cols[1])) + "'");
    }
    row.emotion = *emotion;
    std::array<double, FeatureVector::kDims> values{};
    for (std::size_t f = 0; f < values.size(); ++f) {
      const auto v = detail::parse_number<double>(cols[2 + f]);
      if (!v || !std::isfinite(*v)) throw Error(ErrorKind::MalformedRow, where + ": bad number");
      values[f] = *v;
    }
    row.features = FeatureVector::from_array(values);
    if (row.features.acc_mag_std < 0.0 || row.features.gyro_mag_std < 0.0) {
      throw Error(ErrorKind::MalformedRow, where + ": negative standard deviation");
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<FeatureRow> read_features_csv(const std::filesystem::path& path) {
  return parse_features_csv(read_text_file(path));
}

std::string format_trace_csv(const LabeledSession& session) {
  std::string out = "t_ms,emotion,acc_mag,gyro_mag\n";
  for (const auto& ls : session.labeled) {
    out += std::to_string(ls.sample.t_ms);
    out += ',';
    out += emotion_name(ls.emotion);
    out += ',' + detail::format_double(magnitude(ls.sample.acc));
    out += ',' + detail::format_double(magnitude(ls.sample.gyro)) + '\n';
  }
  return out;
}

} // namespace hm
