#pragma once

#include <stdexcept>
#include <string>

namespace samplenash {

enum class ErrorCode {
  kNonFinite,
  kDimensionMismatch,
  kUndefined,
  kDegenerateD,
  kInactiveRow,
  kDomainError,
  kInvalidArgs,
  kWrongShape,
  kPreconditionViolated,
  kWrongFamily,
  kParseError,
  kIoError,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace samplenash
