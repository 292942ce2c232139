#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fftower {

enum class Errc {
  InvalidFieldSpec,
  DivisionByZero,
  FieldMismatch,
  NotCoprimeToCharacteristic,
  ZeroArgument,
  NegativeValuation,
  InfinitePlaceUnsupported,
  NotIrreducible,
  WeakApproximationInfeasible,
  ValuationAmbiguous,
  UnsupportedAction,
  NonIntegralGenus,
  SplittingUndetermined,
  ValidationFailed,
  NonIntegralInvariant,
  NotAnASExtension,
  ConstantFieldTooSmall,
  NotPrimitive,
  StandardFormViolation,
  SharedRamification,
  DivisibilityObstruction,
  SharedPoles,
  ClosureFailure,
  NotCyclic,
  DecompositionInconsistent,
  ParseError,
  InvariantViolation,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidFieldSpec: return "InvalidFieldSpec";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotCoprimeToCharacteristic: return "NotCoprimeToCharacteristic";
    case Errc::ZeroArgument: return "ZeroArgument";
    case Errc::NegativeValuation: return "NegativeValuation";
    case Errc::InfinitePlaceUnsupported: return "InfinitePlaceUnsupported";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::WeakApproximationInfeasible: return "WeakApproximationInfeasible";
    case Errc::ValuationAmbiguous: return "ValuationAmbiguous";
    case Errc::UnsupportedAction: return "UnsupportedAction";
    case Errc::NonIntegralGenus: return "NonIntegralGenus";
    case Errc::SplittingUndetermined: return "SplittingUndetermined";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::NonIntegralInvariant: return "NonIntegralInvariant";
    case Errc::NotAnASExtension: return "NotAnASExtension";
    case Errc::ConstantFieldTooSmall: return "ConstantFieldTooSmall";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::StandardFormViolation: return "StandardFormViolation";
    case Errc::SharedRamification: return "SharedRamification";
    case Errc::DivisibilityObstruction: return "DivisibilityObstruction";
    case Errc::SharedPoles: return "SharedPoles";
    case Errc::ClosureFailure: return "ClosureFailure";
    case Errc::NotCyclic: return "NotCyclic";
    case Errc::DecompositionInconsistent: return "DecompositionInconsistent";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

// Internal invariant failures map to CLI exit code 2; everything else is a
// rejection of the input (exit code 1).
inline bool is_internal(Errc c) {
  return c == Errc::InvariantViolation || c == Errc::NonIntegralGenus ||
         c == Errc::NonIntegralInvariant || c == Errc::DecompositionInconsistent;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code), detail_(detail) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

#define FFTOWER_ENSURE(cond, msg)                                     \
  do {                                                                \
    if (!(cond)) ::fftower::fail(::fftower::Errc::InvariantViolation, \
                                 std::string(msg));                   \
  } while (0)

}  // namespace fftower
