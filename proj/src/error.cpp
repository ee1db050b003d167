#include "treecast/error.hpp"

namespace treecast {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RowSum: return "RowSumError";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NonErgodic: return "NonErgodic";
    case ErrorKind::Cycle: return "CycleError";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotACutset: return "NotACutset";
    case ErrorKind::NotMinimal: return "NotMinimal";
    case ErrorKind::NotFoundWithinCap: return "NotFoundWithinCap";
    case ErrorKind::AtomBudgetExceeded: return "AtomBudgetExceeded";
    case ErrorKind::ZeroLikelihood: return "ZeroLikelihood";
    case ErrorKind::DivergentSeries: return "DivergentSeries";
    case ErrorKind::AboveThreshold: return "AboveThreshold";
    case ErrorKind::ZeroEntry: return "ZeroEntry";
    case ErrorKind::DegenerateNu: return "DegenerateNu";
    case ErrorKind::RatioViolation: return "RatioViolation";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

}  // namespace treecast
