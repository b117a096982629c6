#include "blindinv/error.hpp"

namespace blindinv {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::IndexOutOfTheta: return "IndexOutOfTheta";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::ChainDiverged: return "ChainDiverged";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace blindinv
