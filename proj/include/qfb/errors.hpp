#pragma once

#include <stdexcept>
#include <string>

namespace qfb {

enum class Errc {
  DivisionByZero,
  FieldMismatch,
  ZeroInput,
  UnsupportedTower,
  FactorizationLimit,
  Parse,
  WitnessSearchExhausted,
  NotDivisible,
  PreconditionViolated,
  WrongShape,
  RewriteFailed,
  ReciprocityViolation,
  DegenerateBlock,
  SearchExhausted,
  NormalizationImpossible,
  UnsupportedPlace,
  AssertionFailed,
};

const char* errc_name(Errc code) noexcept;

/// All library failures surface as this exception; `code()` identifies the contract that failed.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse failures carry the byte offset into the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(Errc::Parse, what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace qfb
