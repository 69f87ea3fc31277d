#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vnfp {

enum class ErrorCode {
  DivisionByZero,
  UndefinedInfinityPattern,
  NonPositiveExponent,
  FParamsOutOfDomain,
  WeightSumNotOne,
  LFreeIndexOutOfRange,
  UnknownAtom,
  MergeOnNonSelfSymmetric,
  NotSelfSymmetric,
  AttributeConflict,
  InvalidExpression,
  SyntaxError,
  DuplicateAtomDecl,
  NotAFactorCertificate,
  InadmissibleWitness,
  NotAFactorForm,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the engine reports. The code is stable and
/// is what the CLI maps to exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class SyntaxError : public Error {
public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// True for errors raised while reading program text (as opposed to domain
/// checks on a well-formed program).
inline bool is_parse_error(ErrorCode code) {
  return code == ErrorCode::SyntaxError || code == ErrorCode::DuplicateAtomDecl;
}

}  // namespace vnfp
