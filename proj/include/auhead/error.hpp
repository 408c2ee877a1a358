#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace auhead {

enum class ErrorKind {
  IndexOutOfRange,
  BadLength,
  ValueOutOfRange,
  InvalidArgument,
  EmptySequence,
  BadPhase,
  ParseError,
  BadIndex,
  BadIntensity,
  UnknownEmotion,
  NoEmotionHeader,
  NoFrames,
  ShapeMismatch,
  BadDimensions,
  DimensionMismatch,
  TooSmall,
  LengthMismatch,
  EmptyInput,
  CorruptFile,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. The kind selects the failure class;
/// index/value/offset carry the location details some kinds report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

  std::optional<long long> index;
  std::optional<double> value;
  std::optional<std::size_t> offset;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace auhead
