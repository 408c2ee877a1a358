#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auhead/au_core.hpp"
#include "auhead/codec.hpp"

namespace auhead {

/// Settings substituted into the instruction template.
struct PromptTemplateConfig {
  int sample_rate_hz = 16000;
  double fps = 5.0;
  /// Template text with {sample_rate_khz}, {frame_samples}, {fps} and
  /// {au_definitions} placeholders. Defaults to the embedded template.
  std::string template_text = std::string(default_template());
  AuTaxonomy taxonomy = AuTaxonomy::builtin();
  CodecConfig codec = {};

  static std::string_view default_template() noexcept;
};

/// "AU0 left eye closure; AU1 ...; and AU23 nose wrinkle"
std::string au_definition_list(const AuTaxonomy& taxonomy);

/// The instruction text shared by training and inference records.
std::string render_instruction(const PromptTemplateConfig& config);

struct PromptMessage {
  std::string role;
  std::optional<std::string> audio;
  std::string content;

  friend bool operator==(const PromptMessage&, const PromptMessage&) = default;
};

struct PromptRecord {
  std::vector<PromptMessage> messages;

  /// One JSON object on a single line, keys in messages/role/audio/content order.
  std::string to_jsonl() const;
  static PromptRecord from_json(std::string_view text);

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

/// User instruction plus the "<emotion>, [[...]]" assistant answer.
/// Throws EmptySequence, UnknownEmotion or InvalidArgument (empty path).
PromptRecord build_training_record(std::string_view audio_path, std::string_view emotion, const SparseSequence& seq,
                                   const PromptTemplateConfig& config = {},
                                   const EmotionTaxonomy& emotions = EmotionTaxonomy::mead8());

/// User-only record with the same instruction text.
PromptRecord build_inference_prompt(std::string_view audio_path, const PromptTemplateConfig& config = {});

struct ParseReport {
  EmotionLabel emotion;
  SparseSequence frames;
  std::size_t complete_frames = 0;
  bool dropped_suffix = false;
  std::vector<std::string> warnings;
};

/// Lenient reader for model responses: accepts ".52", "0.52" and "1.0",
/// (i, v) tuples as well as [i, v] pairs, clamps intensities into [0, 1],
/// keeps the first of duplicate indices and stops at the first incomplete
/// frame. Throws NoEmotionHeader or NoFrames.
ParseReport parse_response(std::string_view text, const EmotionTaxonomy& taxonomy = EmotionTaxonomy::mead8(),
                           double fps = 5.0);

}  // namespace auhead
