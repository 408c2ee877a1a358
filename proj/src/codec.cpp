#include "auhead/codec.hpp"

#include <cmath>
#include <string>

#include "token_scan.hpp"

namespace auhead {

namespace {

std::int64_t pow10(int decimals) {
  std::int64_t p = 1;
  for (int i = 0; i < decimals; ++i) p *= 10;
  return p;
}

void append_pair(std::string& out, int index, double value, int decimals) {
  out += '[';
  out += std::to_string(index);
  out += ", ";
  out += format_intensity(value, decimals);
  out += ']';
}

void append_sparse_frame(std::string& out, const SparseAuFrame& frame, int decimals) {
  out += '[';
  bool first = true;
  for (const auto& p : frame.pairs()) {
    if (!first) out += ", ";
    first = false;
    append_pair(out, p.index, p.intensity, decimals);
  }
  out += ']';
}

[[noreturn]] void parse_error(std::size_t offset, const std::string& what) {
  Error err(ErrorKind::ParseError, what + " at byte " + std::to_string(offset));
  err.offset = offset;
  throw err;
}

}  // namespace

void CodecConfig::validate() const {
  if (!(lambda >= 0.0 && lambda < 1.0)) fail(ErrorKind::InvalidArgument, "lambda must satisfy 0 <= lambda < 1");
  if (quantize_decimals < 1 || quantize_decimals > 9) {
    fail(ErrorKind::InvalidArgument, "quantize_decimals must be between 1 and 9");
  }
}

SparseAuFrame sparsify(const AuVector& frame, const CodecConfig& config) {
  config.validate();
  std::vector<AuPair> pairs;
  for (std::size_t i = 0; i < kNumAus; ++i) {
    if (frame[i] > config.lambda) pairs.push_back({static_cast<int>(i), frame[i]});
  }
  return SparseAuFrame(std::move(pairs));
}

AuVector densify(const SparseAuFrame& frame) {
  AuVector::Storage values{};
  for (const auto& p : frame.pairs()) values[static_cast<std::size_t>(p.index)] = p.intensity;
  return AuVector(values);
}

SparseSequence sparsify(const DenseSequence& seq, const CodecConfig& config) {
  config.validate();
  std::vector<SparseAuFrame> frames;
  frames.reserve(seq.size());
  for (const auto& f : seq.frames()) frames.push_back(sparsify(f, config));
  return SparseSequence(seq.fps(), std::move(frames));
}

DenseSequence densify(const SparseSequence& seq) {
  std::vector<AuVector> frames;
  frames.reserve(seq.size());
  for (const auto& f : seq.frames()) frames.push_back(densify(f));
  return DenseSequence(seq.fps(), std::move(frames));
}

std::int64_t quantize_steps(double value, int decimals) {
  const std::int64_t scale = pow10(decimals);
  // The 1e-9 nudge rounds decimal ties (0.285) up despite binary error.
  const double scaled = std::floor(value * static_cast<double>(scale) + 0.5 + 1e-9);
  if (scaled <= 0.0) return 0;
  if (scaled >= static_cast<double>(scale)) return scale;
  return static_cast<std::int64_t>(scaled);
}

double quantize(double value, int decimals) {
  return static_cast<double>(quantize_steps(value, decimals)) / static_cast<double>(pow10(decimals));
}

std::string format_intensity(double value, int decimals) {
  const std::int64_t steps = quantize_steps(value, decimals);
  if (steps >= pow10(decimals)) return "1.0";
  std::string digits = std::to_string(steps);
  return "." + std::string(static_cast<std::size_t>(decimals) - digits.size(), '0') + digits;
}

std::string serialize_frames(const SparseSequence& seq, const CodecConfig& config) {
  config.validate();
  std::string out = "[";
  bool first = true;
  for (const auto& frame : seq.frames()) {
    if (!first) out += ", ";
    first = false;
    append_sparse_frame(out, frame, config.quantize_decimals);
  }
  out += ']';
  return out;
}

std::string serialize_tokens(const EmotionLabel& emotion, const SparseSequence& seq, const CodecConfig& config) {
  if (seq.empty()) fail(ErrorKind::EmptySequence, "cannot serialize a sequence with zero frames");
  if (emotion.text.empty()) fail(ErrorKind::UnknownEmotion, "emotion label is empty");
  return emotion.text + ", " + serialize_frames(seq, config);
}

DecodedTokens deserialize_tokens(std::string_view text, const EmotionTaxonomy& taxonomy, double fps) {
  const std::size_t header_end = text.find(", [");
  if (header_end == std::string_view::npos) parse_error(0, "missing '<emotion>, [' header");
  EmotionLabel emotion = taxonomy.resolve(text.substr(0, header_end));

  detail::Scanner s(text, header_end + 2);
  s.consume('[');
  std::vector<SparseAuFrame> frames;
  if (s.peek() == ']') {
    // "<emotion>, []" is well-formed but has no frames.
    s.consume(']');
    if (!s.at_end()) parse_error(s.pos(), "trailing characters");
    fail(ErrorKind::EmptySequence, "token text contains zero frames");
  }

  while (true) {
    if (!s.consume('[')) parse_error(s.pos(), "expected '[' opening a frame");
    std::vector<AuPair> pairs;
    if (!s.consume(']')) {
      while (true) {
        if (!s.consume('[')) parse_error(s.pos(), "expected '[' opening a pair");
        const std::size_t index_at = s.pos();
        const auto index = s.scan_int();
        if (!index) parse_error(s.pos(), "expected an AU index");
        if (*index < 0 || *index >= static_cast<long long>(kNumAus)) {
          Error err(ErrorKind::BadIndex, "AU index " + std::to_string(*index) + " outside 0..23");
          err.index = *index;
          err.offset = index_at;
          throw err;
        }
        if (!s.consume(", ")) parse_error(s.pos(), "expected ', ' after AU index");
        const std::size_t value_at = s.pos();
        const auto value = s.scan_number();
        if (!value) parse_error(s.pos(), "expected a numeric intensity");
        if (!(*value >= 0.0 && *value <= 1.0)) {
          Error err(ErrorKind::BadIntensity, "intensity outside [0, 1]");
          err.index = *index;
          err.value = *value;
          err.offset = value_at;
          throw err;
        }
        if (!pairs.empty() && pairs.back().index >= *index) {
          parse_error(index_at, "AU indices must be strictly increasing");
        }
        pairs.push_back({static_cast<int>(*index), *value});
        if (!s.consume(']')) parse_error(s.pos(), "expected ']' closing a pair");
        if (s.consume(']')) break;
        if (!s.consume(", ")) parse_error(s.pos(), "expected ', ' or ']' after a pair");
      }
    }
    frames.emplace_back(std::move(pairs));
    if (s.consume(']')) break;
    if (!s.consume(", ")) parse_error(s.pos(), "expected ', ' or ']' after a frame");
  }
  if (!s.at_end()) parse_error(s.pos(), "trailing characters");
  return DecodedTokens{std::move(emotion), SparseSequence(fps, std::move(frames))};
}

std::string render_dense_frames(const DenseSequence& seq, const CodecConfig& config) {
  config.validate();
  std::string out = "[";
  bool first_frame = true;
  for (const auto& frame : seq.frames()) {
    if (!first_frame) out += ", ";
    first_frame = false;
    out += '[';
    for (std::size_t i = 0; i < kNumAus; ++i) {
      if (i != 0) out += ", ";
      out += format_intensity(frame[i], config.quantize_decimals);
    }
    out += ']';
  }
  out += ']';
  return out;
}

CompressionStats compression_stats(const DenseSequence& seq, const CodecConfig& config) {
  if (seq.empty()) fail(ErrorKind::EmptySequence, "compression statistics need at least one frame");
  config.validate();

  const SparseSequence sparse = sparsify(seq, config);
  CompressionStats stats;
  stats.dense_chars = render_dense_frames(seq, config).size();
  stats.sparse_chars = serialize_frames(sparse, config).size();

  std::size_t active = 0;
  for (const auto& f : sparse.frames()) active += f.size();
  stats.mean_active_per_frame = static_cast<double>(active) / static_cast<double>(sparse.size());

  if (stats.dense_chars > 0) {
    stats.reduction_pct =
        100.0 * (1.0 - static_cast<double>(stats.sparse_chars) / static_cast<double>(stats.dense_chars));
  }

  std::vector<SparseAuFrame> all_pairs;
  all_pairs.reserve(seq.size());
  for (const auto& f : seq.frames()) {
    std::vector<AuPair> pairs;
    for (std::size_t i = 0; i < kNumAus; ++i) pairs.push_back({static_cast<int>(i), f[i]});
    all_pairs.emplace_back(std::move(pairs));
  }
  stats.all_pairs_chars = serialize_frames(SparseSequence(seq.fps(), std::move(all_pairs)), config).size();
  return stats;
}

}  // namespace auhead
