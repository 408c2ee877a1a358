#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "auhead/au_core.hpp"

namespace auhead {

struct CodecConfig {
  /// Sparsity threshold: an AU is kept iff its intensity is strictly greater.
  double lambda = 0.0;
  /// Decimal places kept when intensities are rendered as text.
  int quantize_decimals = 2;

  /// Throws InvalidArgument unless 0 <= lambda < 1 and 1 <= decimals <= 9.
  void validate() const;
};

SparseAuFrame sparsify(const AuVector& frame, const CodecConfig& config = {});
AuVector densify(const SparseAuFrame& frame);

SparseSequence sparsify(const DenseSequence& seq, const CodecConfig& config = {});
DenseSequence densify(const SparseSequence& seq);

/// Round-half-up to `decimals` places, returned as an integer count of
/// 10^-decimals steps (0 .. 10^decimals).
std::int64_t quantize_steps(double value, int decimals);
/// Value after quantization, i.e. quantize_steps(v, d) / 10^d.
double quantize(double value, int decimals);

/// ".52" for values below one, "1.0" for one.
std::string format_intensity(double value, int decimals = 2);

/// "[[[i, v], ...], [...], ...]": the frame body without the emotion prefix.
std::string serialize_frames(const SparseSequence& seq, const CodecConfig& config = {});

/// "<emotion>, [[[i, v], ...], ...]". Throws EmptySequence for zero frames.
std::string serialize_tokens(const EmotionLabel& emotion, const SparseSequence& seq, const CodecConfig& config = {});

struct DecodedTokens {
  EmotionLabel emotion;
  SparseSequence sequence;
};

/// Strict inverse of serialize_tokens. The text carries no frame rate, so the
/// caller supplies it. Throws ParseError (with byte offset), BadIndex,
/// BadIntensity, UnknownEmotion or EmptySequence.
DecodedTokens deserialize_tokens(std::string_view text, const EmotionTaxonomy& taxonomy = EmotionTaxonomy::mead8(),
                                 double fps = 5.0);

/// Fixed-width dense rendering: every frame lists all 24 quantized values.
std::string render_dense_frames(const DenseSequence& seq, const CodecConfig& config = {});

struct CompressionStats {
  std::size_t dense_chars = 0;
  std::size_t sparse_chars = 0;
  double reduction_pct = 0.0;
  double mean_active_per_frame = 0.0;
  /// Length of the frame body if every AU were emitted as an "[i, v]" pair.
  /// Reported for context only; reduction_pct is relative to dense_chars.
  std::size_t all_pairs_chars = 0;
};

CompressionStats compression_stats(const DenseSequence& seq, const CodecConfig& config = {});

}  // namespace auhead
