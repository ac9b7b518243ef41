#pragma once

#include <stdexcept>
#include <string>

namespace ccsub {

enum class ErrorKind {
  OutOfDomain,
  NotSPD,
  DegenerateInput,
  OddDimensionMismatch,
  DimensionMismatch,
  FrameMismatch,
  RankDeficient,
  MissingStructure,
  NotVertical,
  PreconditionNotMet,
  ConstructionInvalid,
  UnknownExample,
  UnknownCheck,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::OddDimensionMismatch: return "OddDimensionMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::MissingStructure: return "MissingStructure";
    case ErrorKind::NotVertical: return "NotVertical";
    case ErrorKind::PreconditionNotMet: return "PreconditionNotMet";
    case ErrorKind::ConstructionInvalid: return "ConstructionInvalid";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
  }
  return "Unknown";
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ccsub
