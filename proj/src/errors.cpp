#include "qfb/errors.hpp"

namespace qfb {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::UnsupportedTower: return "UnsupportedTower";
    case Errc::FactorizationLimit: return "FactorizationLimit";
    case Errc::Parse: return "Parse";
    case Errc::WitnessSearchExhausted: return "WitnessSearchExhausted";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::WrongShape: return "WrongShape";
    case Errc::RewriteFailed: return "RewriteFailed";
    case Errc::ReciprocityViolation: return "ReciprocityViolation";
    case Errc::DegenerateBlock: return "DegenerateBlock";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::NormalizationImpossible: return "NormalizationImpossible";
    case Errc::UnsupportedPlace: return "UnsupportedPlace";
    case Errc::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

}  // namespace qfb
