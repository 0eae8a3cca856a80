#pragma once

#include <stdexcept>
#include <string>

namespace secrec {

/// Stable machine-readable error categories. The service maps these onto
/// HTTP status codes and the CLI onto exit codes.
enum class ErrorCode {
  ParseError,
  SemanticError,
  InvalidKnowledgeBase,
  UnknownKnowledgeBase,
  UnknownProperty,
  UnknownPattern,
  ValueOutOfDomain,
  ContextViolation,
  IncompleteContext,
  EmptyFeasibleSet,
  FeasibleSetNotEmpty,
  DegenerateWeights,
  WrongState,
  AlreadyAnswered,
  NotAnswered,
  NotRecommended,
  UnknownSession,
  CorruptSnapshot,
  MigrationRequired,
  InvalidRequest,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace secrec
