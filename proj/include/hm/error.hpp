#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hm {

enum class ErrorKind {
  // wire
  BadSync,
  BadChecksum,
  BadLength,
  // session
  UnknownEmotion,
  OverlappingSegments,
  InvertedInterval,
  MalformedRow,
  UnsortedSamples,
  IoFailure,
  MalformedLine,
  // features
  EmptySeries,
  InsufficientSamples,
  // learn
  DegenerateDataset,
  InvalidHyperparameters,
  TooFewRows,
  LabelDomainMismatch,
  EmptyMatrix,
  // matrix
  MissingEmotion,
  DegenerateTrait,
  MissingEmotionFeatures,
  // synth
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Every data or validation failure in the library surfaces as an hm::Error.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace hm
