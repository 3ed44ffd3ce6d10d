#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kbo {

enum class ErrorCode {
  ZeroWeightConstant,
  TwoZeroWeightUnaries,
  IncompatiblePrecedence,
  NotTotalOrder,
  NoConstant,
  InvalidSignature,
  UnknownSymbol,
  SyntaxError,
  ArityMismatch,
  WrongSignatureClass,
  MalformedEquation,
  ResourceLimit,
  WitnessSearchExhausted,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Library error. Parameter validation reports every violated condition at
/// once, so an error carries a list of (code, message) diagnostics; the
/// first one is also the error's own code.
class Error : public std::runtime_error {
 public:
  struct Diagnostic {
    ErrorCode code;
    std::string message;
  };

  Error(ErrorCode code, const std::string& message);
  explicit Error(std::vector<Diagnostic> diagnostics);

  ErrorCode code() const { return diagnostics_.front().code; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  bool has(ErrorCode code) const;

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Syntax errors remember the byte offset into the parsed text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace kbo
