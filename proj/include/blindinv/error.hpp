#pragma once

#include <stdexcept>
#include <string>

namespace blindinv {

enum class ErrorCode {
  LevelMismatch,
  IndexOutOfTheta,
  ModelMismatch,
  SingularOperator,
  ChainDiverged,
  ShapeMismatch,
  EmptyGrid,
  Unsupported,
  ConfigError,
  IoError,
  ParseError,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying one of the library error kinds. The C API maps these
/// onto status codes; C++ callers may catch by code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blindinv
