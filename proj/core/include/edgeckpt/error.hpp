#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgeckpt {

enum class ErrorCode {
  kInvalidArgument,
  kCalibrationUnderdetermined,
  kBadData,
  kInfeasible,
  kInvalidSegments,
  kInvalidLength,
  kOverflow,
  kOracleScope,
  kUndefinedFactor,
  kInfeasibleBudget,
  kNeverFits,
  kParse,
};

/// Stable kebab-case name, used as the prefix of every error message.
std::string_view to_string(ErrorCode code);

/// The one exception type thrown by the library. `what()` reads
/// "<code>: <detail>" so that the CLI can print it verbatim as a
/// single machine-parsable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edgeckpt
