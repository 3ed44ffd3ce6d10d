#include "kbo/error.hpp"

#include <algorithm>

namespace kbo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroWeightConstant: return "ZeroWeightConstant";
    case ErrorCode::TwoZeroWeightUnaries: return "TwoZeroWeightUnaries";
    case ErrorCode::IncompatiblePrecedence: return "IncompatiblePrecedence";
    case ErrorCode::NotTotalOrder: return "NotTotalOrder";
    case ErrorCode::NoConstant: return "NoConstant";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::WrongSignatureClass: return "WrongSignatureClass";
    case ErrorCode::MalformedEquation: return "MalformedEquation";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::WitnessSearchExhausted: return "WitnessSearchExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string join_messages(const std::vector<Error::Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += "; ";
    out += error_code_name(d.code);
    out += ": ";
    out += d.message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : Error(std::vector<Diagnostic>{{code, message}}) {}

Error::Error(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {
  if (diagnostics_.empty()) diagnostics_.push_back({ErrorCode::InvalidArgument, "unspecified"});
}

bool Error::has(ErrorCode code) const {
  return std::any_of(diagnostics_.begin(), diagnostics_.end(),
                     [code](const Diagnostic& d) { return d.code == code; });
}

SyntaxError::SyntaxError(const std::string& message, std::size_t position)
    : Error(ErrorCode::SyntaxError, message + " at offset " + std::to_string(position)),
      position_(position) {}

}  // namespace kbo
