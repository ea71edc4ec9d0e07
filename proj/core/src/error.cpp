#include "swlab/error.hpp"

namespace swlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidRange: return "invalid-range";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::NonFiniteValue: return "non-finite-value";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::SingularInput: return "singular-input";
    case ErrorKind::TooCloseToOne: return "too-close-to-one";
    case ErrorKind::MissingMultiplier: return "missing-multiplier";
    case ErrorKind::SupportLeakage: return "support-leakage";
    case ErrorKind::InvalidWindow: return "invalid-window";
    case ErrorKind::UnknownFamily: return "unknown-family";
    case ErrorKind::ZeroDenominator: return "zero-denominator";
    case ErrorKind::InsufficientDecades: return "insufficient-decades";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace swlab
