#include "auhead/error.hpp"

namespace auhead {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptySequence: return "EmptySequence";
    case ErrorKind::BadPhase: return "BadPhase";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::BadIntensity: return "BadIntensity";
    case ErrorKind::UnknownEmotion: return "UnknownEmotion";
    case ErrorKind::NoEmotionHeader: return "NoEmotionHeader";
    case ErrorKind::NoFrames: return "NoFrames";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BadDimensions: return "BadDimensions";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::CorruptFile: return "CorruptFile";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace auhead
