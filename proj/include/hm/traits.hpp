#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hm {

enum class TraitId : std::uint8_t {
  Smoker,
  ReligiousPractitioner,
  FastFoodIntake,
  HighFatIntake,
  HighSugarIntake,
  HeartDiseaseInFamily,
  DiabetesInFamily,
};

inline constexpr std::size_t kTraitCount = 7;

inline constexpr std::array<TraitId, kTraitCount> kAllTraits{
    TraitId::Smoker,          TraitId::ReligiousPractitioner, TraitId::FastFoodIntake,
    TraitId::HighFatIntake,   TraitId::HighSugarIntake,       TraitId::HeartDiseaseInFamily,
    TraitId::DiabetesInFamily};

inline std::size_t trait_index(TraitId t) { return static_cast<std::size_t>(t); }

std::string_view trait_name(TraitId t);   // "HeartDiseaseInFamily"
std::string_view trait_column(TraitId t); // "heart_disease_in_family"

// yes/no for six traits; Low/Medium/High for FastFoodIntake.
const std::vector<std::string>& trait_domain(TraitId t);

// Canonical spelling of a case-insensitive answer, or empty if invalid.
std::string canonical_trait_value(TraitId t, std::string_view value);

enum class Gender : std::uint8_t { Female, Male, Other };
std::string_view gender_name(Gender g);

struct ParticipantRecord {
  std::string id;
  int age = 0;
  Gender gender = Gender::Other;
  std::map<TraitId, std::string> answers;

  friend bool operator==(const ParticipantRecord&, const ParticipantRecord&) = default;
};

// CSV: participant_id, the seven trait columns, age, gender. Throws
// MalformedRow (including unanswered traits).
std::string format_traits_csv(const std::vector<ParticipantRecord>& records);
std::vector<ParticipantRecord> parse_traits_csv(std::string_view text);
std::vector<ParticipantRecord> read_traits_csv(const std::filesystem::path& path);

} // namespace hm
