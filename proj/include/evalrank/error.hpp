#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evalrank {

enum class ErrorCode {
  ParseError,
  SchemaError,
  ReferentialError,
  TemporalError,
  DuplicateIntroducer,
  ConstraintError,
  CycleDetected,
  MultipleRoots,
  InvalidRoot,
  DanglingParent,
  LevelInversion,
  DuplicateNode,
  UnknownNode,
  UnknownAchievement,
  NotOriented,
  GraphCorpusMismatch,
  StepOutOfRange,
  NonPositiveDim,
  ConfigError,
  CoherenceError,
  NoContributors,
  UnknownInstitution,
  UndefinedDenominator,
  UsageError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports. The code is machine-parsable; what() is
// the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evalrank
