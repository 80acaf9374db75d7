#include "hm/session.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hm/error.hpp"
#include "strings.hpp"

namespace hm {

using detail::lines;
using detail::parse_number;
using detail::split;
using detail::trim;

std::size_t Timeline::find(std::uint32_t t_ms) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t_ms,
                             [](std::uint32_t t, const Segment& s) { return t < s.start_ms; });
  if (it == segments_.begin()) return npos;
  --it;
  return it->contains(t_ms) ? static_cast<std::size_t>(it - segments_.begin()) : npos;
}

Timeline make_timeline(std::vector<Segment> segments) {
  for (const auto& s : segments) {
    if (s.start_ms >= s.end_ms) {
      throw Error(ErrorKind::InvertedInterval, "segment [" + std::to_string(s.start_ms) + "," +
                                                   std::to_string(s.end_ms) + ") is empty or inverted");
    }
  }
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) { return a.start_ms < b.start_ms; });
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].start_ms < segments[i - 1].end_ms) {
      throw Error(ErrorKind::OverlappingSegments,
                  "segment starting at " + std::to_string(segments[i].start_ms) +
                      " overlaps the one ending at " + std::to_string(segments[i - 1].end_ms));
    }
  }
  Timeline tl;
  tl.segments_ = std::move(segments);
  return tl;
}

Timeline parse_timeline(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty()) throw Error(ErrorKind::MalformedRow, "timeline is empty (missing header)");

  const auto header = split(rows[0], ',');
  if (header.size() != 3 || trim(header[0]) != "emotion" || trim(header[1]) != "start_ms" ||
      trim(header[2]) != "end_ms") {
    throw Error(ErrorKind::MalformedRow, "timeline header must be emotion,start_ms,end_ms");
  }

  std::vector<Segment> segments;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (trim(rows[i]).empty()) continue;
    const auto cols = split(rows[i], ',');
    const auto where = "timeline line " + std::to_string(i + 1);
    if (cols.size() != 3) throw Error(ErrorKind::MalformedRow, where + ": expected 3 columns");
    const auto emotion = parse_emotion(cols[0]);
    if (!emotion) {
      throw Error(ErrorKind::UnknownEmotion, where + ": '" + std::string(trim(cols[0])) + "'");
    }
    const auto start = parse_number<std::uint32_t>(cols[1]);
    const auto end = parse_number<std::uint32_t>(cols[2]);
    if (!start || !end) throw Error(ErrorKind::MalformedRow, where + ": bad timestamp");
    segments.push_back({*emotion, *start, *end});
  }
  return make_timeline(std::move(segments));
}

std::string format_timeline(const Timeline& tl) {
  std::string out = "emotion,start_ms,end_ms\n";
  for (const auto& s : tl.segments()) {
    out += emotion_name(s.emotion);
    out += ',' + std::to_string(s.start_ms) + ',' + std::to_string(s.end_ms) + '\n';
  }
  return out;
}

Timeline read_timeline(const std::filesystem::path& path) {
  return parse_timeline(read_text_file(path));
}

void write_timeline(const std::filesystem::path& path, const Timeline& tl) {
  write_text_file(path, format_timeline(tl));
}

LabeledSession label_samples(std::string_view participant_id, const std::vector<ImuSample>& samples,
                             const Timeline& tl) {
  LabeledSession out;
  out.participant_id = std::string(participant_id);
  out.labeled.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i].t_ms < samples[i - 1].t_ms) {
      throw Error(ErrorKind::UnsortedSamples, "sample " + std::to_string(i) + " at t_ms=" +
                                                  std::to_string(samples[i].t_ms) +
                                                  " precedes its predecessor");
    }
    const auto seg = tl.find(samples[i].t_ms);
    if (seg == Timeline::npos) {
      ++out.dropped;
      continue;
    }
    out.labeled.push_back({samples[i], tl.segments()[seg].emotion, seg});
  }
  return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected 3-element array");
  Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  for (const auto& elem : j) {
    if (!elem.is_number()) throw std::invalid_argument("non-numeric component");
  }
  if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
    throw std::invalid_argument("non-finite component");
  }
  return v;
}

} // namespace

std::string format_session(const Session& session) {
  std::string out;
  out += ojson{{"participant_id", session.participant_id}}.dump();
  out += '\n';
  for (const auto& s : session.samples) {
    ojson row;
    row["t_ms"] = s.t_ms;
    row["acc"] = vec_json(s.acc);
    row["gyro"] = vec_json(s.gyro);
    out += row.dump();
    out += '\n';
  }
  return out;
}

Session parse_session(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty()) throw Error(ErrorKind::MalformedLine, "line 1: missing header object");

  Session session;
  try {
    const auto header = nlohmann::json::parse(rows[0]);
    session.participant_id = header.at("participant_id").get<std::string>();
  } catch (const std::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("line 1: ") + e.what());
  }

  session.samples.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    try {
      const auto row = nlohmann::json::parse(rows[i]);
      const auto& t = row.at("t_ms");
      if (!t.is_number_unsigned() || t.get<std::uint64_t>() > UINT32_MAX) {
        throw std::invalid_argument("t_ms must be an unsigned 32-bit integer");
      }
      ImuSample s;
      s.t_ms = t.get<std::uint32_t>();
      s.acc = vec_from_json(row.at("acc"));
      s.gyro = vec_from_json(row.at("gyro"));
      session.samples.push_back(s);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::MalformedLine, "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return session;
}

void write_session(const std::filesystem::path& path, const Session& session) {
  write_text_file(path, format_session(session));
}

Session read_session(const std::filesystem::path& path) {
  return parse_session(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoFailure, "read failed: " + path.string());
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

} // namespace hm
