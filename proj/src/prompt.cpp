#include "auhead/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "auhead/embedded_data.hpp"
#include "json.hpp"
#include "token_scan.hpp"

namespace auhead {

namespace {

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os << v;
  return os.str();
}

void replace_all(std::string& text, std::string_view key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
}

std::string trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '"'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

void require_audio_path(std::string_view audio_path) {
  if (audio_path.empty()) fail(ErrorKind::InvalidArgument, "audio path must not be empty");
}

struct RawPair {
  long long index;
  double value;
};

// Reads one frame starting at '['. Returns nullopt if the frame is not closed
// properly before the text ends or turns malformed.
std::optional<std::vector<RawPair>> read_frame(detail::Scanner& s) {
  if (!s.consume('[')) return std::nullopt;
  std::vector<RawPair> pairs;
  s.skip_ws();
  if (s.consume(']')) return pairs;
  while (true) {
    s.skip_ws();
    char close = ']';
    if (s.consume('(')) {
      close = ')';
    } else if (!s.consume('[')) {
      return std::nullopt;
    }
    s.skip_ws();
    const auto index = s.scan_int();
    if (!index) return std::nullopt;
    s.skip_ws();
    if (!s.consume(',')) return std::nullopt;
    s.skip_ws();
    const auto value = s.scan_number();
    if (!value) return std::nullopt;
    s.skip_ws();
    if (!s.consume(close)) return std::nullopt;
    pairs.push_back({*index, *value});
    s.skip_ws();
    if (s.consume(']')) return pairs;
    if (!s.consume(',')) return std::nullopt;
  }
}

SparseAuFrame clean_frame(std::vector<RawPair> raw, std::size_t frame_index, std::vector<std::string>& warnings) {
  const std::string where = "frame " + std::to_string(frame_index) + ": ";
  std::vector<AuPair> pairs;
  std::vector<bool> seen(kNumAus, false);
  bool unordered = false;
  for (const auto& p : raw) {
    if (p.index < 0 || p.index >= static_cast<long long>(kNumAus)) {
      warnings.push_back(where + "dropped pair with AU index " + std::to_string(p.index));
      continue;
    }
    if (seen[static_cast<std::size_t>(p.index)]) {
      warnings.push_back(where + "duplicate AU " + std::to_string(p.index) + ", kept the first value");
      continue;
    }
    seen[static_cast<std::size_t>(p.index)] = true;
    double v = p.value;
    if (!(v >= 0.0 && v <= 1.0)) {
      v = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
      warnings.push_back(where + "clamped AU " + std::to_string(p.index) + " intensity into [0, 1]");
    }
    if (!pairs.empty() && pairs.back().index > p.index) unordered = true;
    pairs.push_back({static_cast<int>(p.index), v});
  }
  if (unordered) {
    std::stable_sort(pairs.begin(), pairs.end(), [](const AuPair& a, const AuPair& b) { return a.index < b.index; });
    warnings.push_back(where + "AU indices were out of order and have been sorted");
  }
  return SparseAuFrame(std::move(pairs));
}

}  // namespace

std::string_view PromptTemplateConfig::default_template() noexcept { return embedded::prompt_template; }

std::string au_definition_list(const AuTaxonomy& taxonomy) {
  std::string out;
  const auto& ds = taxonomy.descriptors();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i != 0) out += "; ";
    if (i + 1 == ds.size() && i != 0) out += "and ";
    out += "AU" + std::to_string(ds[i].index) + " " + ds[i].name;
  }
  return out;
}

std::string render_instruction(const PromptTemplateConfig& config) {
  if (config.sample_rate_hz <= 0 || !(config.fps > 0.0)) {
    fail(ErrorKind::InvalidArgument, "sample rate and fps must be positive");
  }
  const double frame_samples = static_cast<double>(config.sample_rate_hz) / config.fps;
  if (frame_samples != std::floor(frame_samples)) {
    fail(ErrorKind::InvalidArgument, "sample rate must be a whole multiple of the AU frame rate");
  }
  std::string text = config.template_text;
  replace_all(text, "{sample_rate_khz}", format_number(config.sample_rate_hz / 1000.0));
  replace_all(text, "{frame_samples}", format_number(frame_samples));
  replace_all(text, "{fps}", format_number(config.fps));
  replace_all(text, "{au_definitions}", au_definition_list(config.taxonomy));
  return text;
}

std::string PromptRecord::to_jsonl() const {
  nlohmann::ordered_json messages_json = nlohmann::ordered_json::array();
  for (const auto& m : messages) {
    nlohmann::ordered_json entry;
    entry["role"] = m.role;
    if (m.audio) entry["audio"] = *m.audio;
    entry["content"] = m.content;
    messages_json.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["messages"] = std::move(messages_json);
  return doc.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

PromptRecord PromptRecord::from_json(std::string_view text) {
  PromptRecord record;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& m : doc.at("messages")) {
      PromptMessage msg;
      msg.role = m.at("role").get<std::string>();
      if (m.contains("audio")) msg.audio = m.at("audio").get<std::string>();
      msg.content = m.at("content").get<std::string>();
      record.messages.push_back(std::move(msg));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed prompt record: ") + e.what());
  }
  return record;
}

PromptRecord build_training_record(std::string_view audio_path, std::string_view emotion, const SparseSequence& seq,
                                   const PromptTemplateConfig& config, const EmotionTaxonomy& emotions) {
  require_audio_path(audio_path);
  if (seq.empty()) fail(ErrorKind::EmptySequence, "training record needs at least one AU frame");
  const EmotionLabel label = emotions.resolve(emotion);

  PromptRecord record = build_inference_prompt(audio_path, config);
  record.messages.push_back({"assistant", std::nullopt, serialize_tokens(label, seq, config.codec)});
  return record;
}

PromptRecord build_inference_prompt(std::string_view audio_path, const PromptTemplateConfig& config) {
  require_audio_path(audio_path);
  PromptRecord record;
  record.messages.push_back({"user", std::string(audio_path), render_instruction(config)});
  return record;
}

ParseReport parse_response(std::string_view text, const EmotionTaxonomy& taxonomy, double fps) {
  const std::size_t header_end = text.find(", [");
  if (header_end == std::string_view::npos) {
    fail(ErrorKind::NoEmotionHeader, "response has no '<emotion>, [' prefix");
  }
  const std::string header = trim(text.substr(0, header_end));
  if (!taxonomy.contains(header)) {
    fail(ErrorKind::NoEmotionHeader, "response header '" + header + "' is not a known emotion");
  }

  ParseReport report;
  report.emotion = taxonomy.resolve(header);

  detail::Scanner s(text, header_end + 2);
  s.consume('[');
  std::vector<SparseAuFrame> frames;
  bool closed = false;
  while (true) {
    s.skip_ws();
    if (s.consume(']')) {
      closed = true;
      break;
    }
    if (!frames.empty()) {
      if (!s.consume(',')) break;
      s.skip_ws();
    }
    auto raw = read_frame(s);
    if (!raw) break;
    frames.push_back(clean_frame(std::move(*raw), frames.size(), report.warnings));
  }

  if (!closed) {
    report.dropped_suffix = true;
    report.warnings.push_back("response ended before the frame list was closed; kept " +
                              std::to_string(frames.size()) + " complete frames");
  } else {
    s.skip_ws();
    if (!s.at_end()) report.warnings.push_back("ignored trailing text after the frame list");
  }
  if (frames.empty()) fail(ErrorKind::NoFrames, "no complete AU frame could be recovered");

  report.complete_frames = frames.size();
  report.frames = SparseSequence(fps, std::move(frames));
  return report;
}

}  // namespace auhead
