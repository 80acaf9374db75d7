#include "hm/error.hpp"

namespace hm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::BadSync: return "BadSync";
  case ErrorKind::BadChecksum: return "BadChecksum";
  case ErrorKind::BadLength: return "BadLength";
  case ErrorKind::UnknownEmotion: return "UnknownEmotion";
  case ErrorKind::OverlappingSegments: return "OverlappingSegments";
  case ErrorKind::InvertedInterval: return "InvertedInterval";
  case ErrorKind::MalformedRow: return "MalformedRow";
  case ErrorKind::UnsortedSamples: return "UnsortedSamples";
  case ErrorKind::IoFailure: return "IoFailure";
  case ErrorKind::MalformedLine: return "MalformedLine";
  case ErrorKind::EmptySeries: return "EmptySeries";
  case ErrorKind::InsufficientSamples: return "InsufficientSamples";
  case ErrorKind::DegenerateDataset: return "DegenerateDataset";
  case ErrorKind::InvalidHyperparameters: return "InvalidHyperparameters";
  case ErrorKind::TooFewRows: return "TooFewRows";
  case ErrorKind::LabelDomainMismatch: return "LabelDomainMismatch";
  case ErrorKind::EmptyMatrix: return "EmptyMatrix";
  case ErrorKind::MissingEmotion: return "MissingEmotion";
  case ErrorKind::DegenerateTrait: return "DegenerateTrait";
  case ErrorKind::MissingEmotionFeatures: return "MissingEmotionFeatures";
  case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

} // namespace hm
