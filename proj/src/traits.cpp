#include "hm/traits.hpp"

#include <set>

#include "hm/error.hpp"
#include "hm/session.hpp"
#include "strings.hpp"

namespace hm {

using detail::iequals;
using detail::lines;
using detail::split;
using detail::trim;

std::string_view trait_name(TraitId t) {
  switch (t) {
  case TraitId::Smoker: return "Smoker";
  case TraitId::ReligiousPractitioner: return "ReligiousPractitioner";
  case TraitId::FastFoodIntake: return "FastFoodIntake";
  case TraitId::HighFatIntake: return "HighFatIntake";
  case TraitId::HighSugarIntake: return "HighSugarIntake";
  case TraitId::HeartDiseaseInFamily: return "HeartDiseaseInFamily";
  case TraitId::DiabetesInFamily: return "DiabetesInFamily";
  }
  return "?";
}

std::string_view trait_column(TraitId t) {
  switch (t) {
  case TraitId::Smoker: return "smoker";
  case TraitId::ReligiousPractitioner: return "religious_practitioner";
  case TraitId::FastFoodIntake: return "fast_food_intake";
  case TraitId::HighFatIntake: return "high_fat_intake";
  case TraitId::HighSugarIntake: return "high_sugar_intake";
  case TraitId::HeartDiseaseInFamily: return "heart_disease_in_family";
  case TraitId::DiabetesInFamily: return "diabetes_in_family";
  }
  return "?";
}

const std::vector<std::string>& trait_domain(TraitId t) {
  static const std::vector<std::string> binary{"no", "yes"};
  static const std::vector<std::string> levels{"Low", "Medium", "High"};
  return t == TraitId::FastFoodIntake ? levels : binary;
}

std::string canonical_trait_value(TraitId t, std::string_view value) {
  value = trim(value);
  for (const auto& v : trait_domain(t)) {
    if (iequals(v, value)) return v;
  }
  return {};
}

std::string_view gender_name(Gender g) {
  switch (g) {
  case Gender::Female: return "female";
  case Gender::Male: return "male";
  case Gender::Other: return "other";
  }
  return "other";
}

namespace {

constexpr std::size_t kColumns = 1 + kTraitCount + 2;

std::string header_line() {
  std::string h = "participant_id";
  for (auto t : kAllTraits) {
    h += ',';
    h += trait_column(t);
  }
  return h + ",age,gender";
}

} // namespace

std::string format_traits_csv(const std::vector<ParticipantRecord>& records) {
  std::string out = header_line() + '\n';
  for (const auto& r : records) {
    out += r.id;
    for (auto t : kAllTraits) {
      out += ',';
      const auto it = r.answers.find(t);
      if (it != r.answers.end()) out += it->second;
    }
    out += ',' + std::to_string(r.age) + ',' + std::string(gender_name(r.gender)) + '\n';
  }
  return out;
}

std::vector<ParticipantRecord> parse_traits_csv(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty()) throw Error(ErrorKind::MalformedRow, "traits file is empty (missing header)");
  const auto header = split(rows[0], ',');
  if (header.size() != kColumns) {
    throw Error(ErrorKind::MalformedRow, "traits header must be: " + header_line());
  }
  for (std::size_t i = 0; i < kColumns; ++i) {
    std::string_view expected = i == 0 ? "participant_id"
                                : i <= kTraitCount ? trait_column(kAllTraits[i - 1])
                                : i == kTraitCount + 1 ? "age"
                                                       : "gender";
    if (trim(header[i]) != expected) {
      throw Error(ErrorKind::MalformedRow, "traits header must be: " + header_line());
    }
  }

  std::vector<ParticipantRecord> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (trim(rows[i]).empty()) continue;
    const auto where = "traits line " + std::to_string(i + 1);
    const auto cols = split(rows[i], ',');
    if (cols.size() != kColumns) throw Error(ErrorKind::MalformedRow, where + ": wrong column count");

    ParticipantRecord r;
    r.id = std::string(trim(cols[0]));
    if (r.id.empty()) throw Error(ErrorKind::MalformedRow, where + ": empty participant_id");
    if (!seen.insert(r.id).second) {
      throw Error(ErrorKind::MalformedRow, where + ": duplicate participant " + r.id);
    }
    for (std::size_t t = 0; t < kTraitCount; ++t) {
      const auto trait = kAllTraits[t];
      auto v = canonical_trait_value(trait, cols[t + 1]);
      if (v.empty()) {
        throw Error(ErrorKind::MalformedRow, where + ": invalid " + std::string(trait_column(trait)) +
                                                 " value '" + std::string(trim(cols[t + 1])) + "'");
      }
      r.answers.emplace(trait, std::move(v));
    }
    const auto age = detail::parse_number<int>(cols[kTraitCount + 1]);
    if (!age || *age < 0) throw Error(ErrorKind::MalformedRow, where + ": bad age");
    r.age = *age;
    const auto g = trim(cols[kTraitCount + 2]);
    if (iequals(g, "female")) {
      r.gender = Gender::Female;
    } else if (iequals(g, "male")) {
      r.gender = Gender::Male;
    } else if (iequals(g, "other")) {
      r.gender = Gender::Other;
    } else {
      throw Error(ErrorKind::MalformedRow, where + ": bad gender '" + std::string(g) + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ParticipantRecord> read_traits_csv(const std::filesystem::path& path) {
  return parse_traits_csv(read_text_file(path));
}

} // namespace hm
