#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fqrigid {

enum class ErrorCode {
  NonPrime,
  DegreeZero,
  FieldTooLarge,
  DivisionByZero,
  LogOfZero,
  IndexNotDividing,
  EmptyM,
  ExponentOutOfRange,
  TooFewPoints,
  ZeroInD,
  ParamOutOfRange,
  SearchSpaceTooLarge,
  DegenerateInput,
  PreconditionViolated,
  NotFound,
  IndexNotDividingQPlus1,
  NotAGraph,
  VInS,
  UnknownCommand,
  InvalidValue,
  IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::NonPrime: return "NonPrime";
  case ErrorCode::DegreeZero: return "DegreeZero";
  case ErrorCode::FieldTooLarge: return "FieldTooLarge";
  case ErrorCode::DivisionByZero: return "DivisionByZero";
  case ErrorCode::LogOfZero: return "LogOfZero";
  case ErrorCode::IndexNotDividing: return "IndexNotDividing";
  case ErrorCode::EmptyM: return "EmptyM";
  case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
  case ErrorCode::TooFewPoints: return "TooFewPoints";
  case ErrorCode::ZeroInD: return "ZeroInD";
  case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
  case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
  case ErrorCode::DegenerateInput: return "DegenerateInput";
  case ErrorCode::PreconditionViolated: return "PreconditionViolated";
  case ErrorCode::NotFound: return "NotFound";
  case ErrorCode::IndexNotDividingQPlus1: return "IndexNotDividingQPlus1";
  case ErrorCode::NotAGraph: return "NotAGraph";
  case ErrorCode::VInS: return "VInS";
  case ErrorCode::UnknownCommand: return "UnknownCommand";
  case ErrorCode::InvalidValue: return "InvalidValue";
  case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Base of every error thrown by the library. The code identifies the
/// failed precondition; the message carries the offending values.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

template <ErrorCode C> class ErrorOf : public Error {
public:
  explicit ErrorOf(const std::string &what) : Error(C, what) {}
};

using NonPrime = ErrorOf<ErrorCode::NonPrime>;
using DegreeZero = ErrorOf<ErrorCode::DegreeZero>;
using FieldTooLarge = ErrorOf<ErrorCode::FieldTooLarge>;
using DivisionByZero = ErrorOf<ErrorCode::DivisionByZero>;
using LogOfZero = ErrorOf<ErrorCode::LogOfZero>;
using IndexNotDividing = ErrorOf<ErrorCode::IndexNotDividing>;
using EmptyM = ErrorOf<ErrorCode::EmptyM>;
using ExponentOutOfRange = ErrorOf<ErrorCode::ExponentOutOfRange>;
using TooFewPoints = ErrorOf<ErrorCode::TooFewPoints>;
using ZeroInD = ErrorOf<ErrorCode::ZeroInD>;
using ParamOutOfRange = ErrorOf<ErrorCode::ParamOutOfRange>;
using SearchSpaceTooLarge = ErrorOf<ErrorCode::SearchSpaceTooLarge>;
using DegenerateInput = ErrorOf<ErrorCode::DegenerateInput>;
using PreconditionViolated = ErrorOf<ErrorCode::PreconditionViolated>;
using NotFound = ErrorOf<ErrorCode::NotFound>;
using IndexNotDividingQPlus1 = ErrorOf<ErrorCode::IndexNotDividingQPlus1>;
using NotAGraph = ErrorOf<ErrorCode::NotAGraph>;
using VInS = ErrorOf<ErrorCode::VInS>;
using UnknownCommand = ErrorOf<ErrorCode::UnknownCommand>;
using InvalidValue = ErrorOf<ErrorCode::InvalidValue>;
using IoFailure = ErrorOf<ErrorCode::IoFailure>;

} // namespace fqrigid
