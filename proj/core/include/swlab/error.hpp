#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swlab {

enum class ErrorKind {
  InvalidRange,
  UnsupportedDimension,
  NonFiniteValue,
  DimensionMismatch,
  IndexOutOfRange,
  SingularInput,
  TooCloseToOne,
  MissingMultiplier,
  SupportLeakage,
  InvalidWindow,
  UnknownFamily,
  ZeroDenominator,
  InsufficientDecades,
  Evaluation,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the sweep runner in particular) can classify rows without
/// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace swlab
