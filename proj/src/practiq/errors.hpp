#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace practiq {

enum class Errc {
  ParseError,
  ResolutionError,
  IoError,
  MissingDatabase,
  DeltaConflict,
  SchemaVersionMismatch,
  SqlParseError,
  UnknownTable,
  RefNotFound,
  ExecError,
  ProviderRefusal,
  RateLimited,
  TagMissing,
  InsufficientShots,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

/// Thrown by the SQL parser; `offset` is the byte position of the failure.
class SqlParseError : public Error {
 public:
  SqlParseError(std::string message, std::size_t offset)
      : Error(Errc::SqlParseError, std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class ExecErrorKind { SyntaxError, UnknownColumn, UnknownTable, Other };

class ExecError : public Error {
 public:
  ExecError(ExecErrorKind kind, std::string message)
      : Error(Errc::ExecError, std::move(message)), kind_(kind) {}
  ExecErrorKind kind() const { return kind_; }

 private:
  ExecErrorKind kind_;
};

// Why a mutation/assembly attempt produced no conversation. Closed set so
// GenStats stay comparable across versions.
enum class SkipReason {
  PreconditionNotMet,
  GoldUnparsable,
  ProviderRefusal,
  QuestionUnchanged,
  CandidateExecFailed,
  FilterValueAbsent,
  InsufficientRows,
  NoSubstituteColumn,
  NoMatchingSql,
  NoAlternateValue,
  DeltaConflict,
  MentionRuleReject,
  BinaryCheckReject,
  NoExecutableCandidate,
  ExecFailure,
};

const char* to_string(SkipReason r);

}  // namespace practiq
