#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prograph {

enum class ErrorCode {
  DuplicateLabel,
  DanglingEndpoint,
  PartialMap,
  UnknownVertex,
  UnknownCell,
  UnknownEdge,
  InvalidGroup,
  InvalidAction,
  NotSubgroup,
  NoTreeLift,
  NotSegment,
  UnknownFactor,
  UnsupportedFactorCount,
  HorizonTooLarge,
  SeparationNotWitnessed,
  BallTooSmall,
  PrimeMismatch,
  NoEquivariantIso,
  PrefixNotSeparated,
  C3Undetermined,
  InvalidInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::PartialMap: return "PartialMap";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::NotSubgroup: return "NotSubgroup";
    case ErrorCode::NoTreeLift: return "NoTreeLift";
    case ErrorCode::NotSegment: return "NotSegment";
    case ErrorCode::UnknownFactor: return "UnknownFactor";
    case ErrorCode::UnsupportedFactorCount: return "UnsupportedFactorCount";
    case ErrorCode::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorCode::SeparationNotWitnessed: return "SeparationNotWitnessed";
    case ErrorCode::BallTooSmall: return "BallTooSmall";
    case ErrorCode::PrimeMismatch: return "PrimeMismatch";
    case ErrorCode::NoEquivariantIso: return "NoEquivariantIso";
    case ErrorCode::PrefixNotSeparated: return "PrefixNotSeparated";
    case ErrorCode::C3Undetermined: return "C3Undetermined";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace prograph
