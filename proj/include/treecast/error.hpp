#pragma once

#include <stdexcept>
#include <string>

namespace treecast {

enum class ErrorKind {
  InvalidArgument,
  RowSum,
  NegativeEntry,
  NonErgodic,
  Cycle,
  CapExceeded,
  NotACutset,
  NotMinimal,
  NotFoundWithinCap,
  AtomBudgetExceeded,
  ZeroLikelihood,
  DivergentSeries,
  AboveThreshold,
  ZeroEntry,
  DegenerateNu,
  RatioViolation,
  BoundViolation,
  Config,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// One subclass per error kind so tests and callers can catch narrowly.
template <ErrorKind K>
class ErrorOf : public Error {
 public:
  explicit ErrorOf(const std::string& what) : Error(K, what) {}
};

using InvalidArgument = ErrorOf<ErrorKind::InvalidArgument>;
using RowSumError = ErrorOf<ErrorKind::RowSum>;
using NegativeEntry = ErrorOf<ErrorKind::NegativeEntry>;
using NonErgodic = ErrorOf<ErrorKind::NonErgodic>;
using CycleError = ErrorOf<ErrorKind::Cycle>;
using CapExceeded = ErrorOf<ErrorKind::CapExceeded>;
using NotACutset = ErrorOf<ErrorKind::NotACutset>;
using NotMinimal = ErrorOf<ErrorKind::NotMinimal>;
using NotFoundWithinCap = ErrorOf<ErrorKind::NotFoundWithinCap>;
using AtomBudgetExceeded = ErrorOf<ErrorKind::AtomBudgetExceeded>;
using ZeroLikelihood = ErrorOf<ErrorKind::ZeroLikelihood>;
using DivergentSeries = ErrorOf<ErrorKind::DivergentSeries>;
using AboveThreshold = ErrorOf<ErrorKind::AboveThreshold>;
using ZeroEntry = ErrorOf<ErrorKind::ZeroEntry>;
using DegenerateNu = ErrorOf<ErrorKind::DegenerateNu>;
using RatioViolation = ErrorOf<ErrorKind::RatioViolation>;
using BoundViolation = ErrorOf<ErrorKind::BoundViolation>;
using ConfigError = ErrorOf<ErrorKind::Config>;
using ParseError = ErrorOf<ErrorKind::Parse>;

}  // namespace treecast
