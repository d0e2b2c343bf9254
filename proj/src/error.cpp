#include "shiftbreak/error.hpp"

namespace shiftbreak {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::Overflow: return "Overflow";
    case Errc::NoInverse: return "NoInverse";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotDivisor: return "NotDivisor";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ForbiddenInput: return "ForbiddenInput";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotInSubgroup: return "NotInSubgroup";
    case Errc::BadWitness: return "BadWitness";
    case Errc::IncompleteWitnesses: return "IncompleteWitnesses";
    case Errc::NotDividing: return "NotDividing";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::Stalled: return "Stalled";
    case Errc::TooLargeForScan: return "TooLargeForScan";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::MismatchedParams: return "MismatchedParams";
    case Errc::BadV: return "BadV";
    case Errc::DegenerateShift: return "DegenerateShift";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::TooSmall: return "TooSmall";
    case Errc::PrincipalCharacter: return "PrincipalCharacter";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::AlgorithmFailure: return "AlgorithmFailure";
  }
  return "Unknown";
}

}  // namespace shiftbreak
