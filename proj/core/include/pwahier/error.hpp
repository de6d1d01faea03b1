#ifndef PWAHIER_ERROR_HPP
#define PWAHIER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwahier {

enum class ErrorCode {
  NonSquare,
  NotSymmetric,
  NoConvergence,
  NotPsd,
  NonFinite,
  DimensionMismatch,
  Unbounded,
  Empty,
  NotTwoD,
  NoCell,
  NotHurwitz,
  NoFeasiblePairing,
  SingularBBt,
  UncertifiedRelation,
  NegativeQuadForm,
  SynthesisFailed,
  InfeasibleCertificate,
  DegenerateState,
  NonFiniteState,
  UncertifiedMode,
  EmptySchedule,
  NonMonotoneTimes,
  EmptyTrajectory,
  IoError,
  ParseError,
  UnknownParameter,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code. Every failure raised by
/// the library is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pwahier

#endif  // PWAHIER_ERROR_HPP
