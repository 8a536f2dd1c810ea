#pragma once

#include <stdexcept>
#include <string>

namespace prk {

enum class ErrorKind {
  kInvalidDimension,
  kInvalidArgument,
  kInvalidSignal,
  kNumericInput,
  kDegenerateRow,
  kDegenerateInstance,
  kEmptyMeasure,
  kOutOfBasin,
  kNoMajority,
  kIo,
  kParse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace prk
