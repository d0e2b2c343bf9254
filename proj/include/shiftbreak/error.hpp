#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftbreak {

enum class Errc {
  NotPrime,
  Overflow,
  NoInverse,
  TooLarge,
  NotDivisor,
  OutOfRange,
  ForbiddenInput,
  NotCoprime,
  NotInSubgroup,
  BadWitness,
  IncompleteWitnesses,
  NotDividing,
  LengthMismatch,
  Stalled,
  TooLargeForScan,
  RangeViolation,
  MismatchedParams,
  BadV,
  DegenerateShift,
  DegeneratePair,
  TooSmall,
  PrincipalCharacter,
  InvalidArgument,
  ConfigError,
  AlgorithmFailure,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace shiftbreak
