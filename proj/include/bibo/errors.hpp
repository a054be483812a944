#pragma once

#include <stdexcept>
#include <string>

namespace bibo {

// Machine-readable failure categories. The CLI maps these to error JSON,
// library users can switch on code() instead of parsing what().
enum class ErrorCode {
    LengthMismatch,
    NonFiniteEntry,
    OutsideDomain,
    PoleHit,
    UnstableMode,
    SectorViolation,
    NotExponentiallyStable,
    NonIntegrableDensity,
    ZeroInput,
    GridMismatch,
    ContourError,
    UnstablePerturbed,
    DomainError,
    AssertionFailure,
    ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace bibo
