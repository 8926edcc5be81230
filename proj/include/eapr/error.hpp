#pragma once

#include <stdexcept>
#include <string>

namespace eapr {

enum class ErrorCode {
  kMalformedCsv,
  kUnparseableCell,
  kEmptyTable,
  kMissingGroupKey,
  kInconsistentOutcomes,
  kAllFeaturesDropped,
  kDegenerateLabels,
  kNonFiniteInput,
  kConvergenceFailure,
  kFeatureMismatch,
  kSingleClassLabels,
  kTooFewInstances,
  kDegenerateFootprint,
  kEmptyInput,
  kInvalidArgument,
  kInvariantViolation,
  kIoFailure,
  kModel,
  kStage,
  kConfig,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kUnparseableCell: return "UnparseableCell";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kMissingGroupKey: return "MissingGroupKey";
    case ErrorCode::kInconsistentOutcomes: return "InconsistentOutcomes";
    case ErrorCode::kAllFeaturesDropped: return "AllFeaturesDropped";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kFeatureMismatch: return "FeatureMismatch";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kTooFewInstances: return "TooFewInstances";
    case ErrorCode::kDegenerateFootprint: return "DegenerateFootprint";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kModel: return "Model";
    case ErrorCode::kStage: return "Stage";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eapr
