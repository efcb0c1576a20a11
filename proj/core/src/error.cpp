#include "edgeckpt/error.hpp"

namespace edgeckpt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kCalibrationUnderdetermined: return "calibration-underdetermined";
    case ErrorCode::kBadData: return "bad-data";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kInvalidSegments: return "invalid-segments";
    case ErrorCode::kInvalidLength: return "invalid-length";
    case ErrorCode::kOverflow: return "overflow";
    case ErrorCode::kOracleScope: return "oracle-scope";
    case ErrorCode::kUndefinedFactor: return "undefined-factor";
    case ErrorCode::kInfeasibleBudget: return "infeasible-budget";
    case ErrorCode::kNeverFits: return "never-fits";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace edgeckpt
