// auhead: command-line front end for the AU data path.
//
// Exit codes: 0 success, 1 validation / malformed input, 2 I/O failure.
// Results go to stdout or --out files, diagnostics to stderr (JSON objects
// with --json).

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "auhead/au_core.hpp"
#include "auhead/codec.hpp"
#include "auhead/embedding.hpp"
#include "auhead/error.hpp"
#include "auhead/geometry.hpp"
#include "auhead/guidance.hpp"
#include "auhead/io.hpp"
#include "auhead/kernels.hpp"
#include "auhead/metrics.hpp"
#include "auhead/prompt.hpp"
#include "auhead/resample.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace auhead;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kVideoFps = 25.0;
constexpr double kTokenFps = 5.0;

// A library error attributed to the flag (or environment variable) that caused it.
struct FlagError {
  ErrorKind kind;
  std::string flag;
  std::string message;
};

std::string strip_kind(const Error& e) {
  std::string_view what = e.what();
  const auto prefix = std::string(to_string(e.kind())) + ": ";
  if (what.starts_with(prefix)) what.remove_prefix(prefix.size());
  return std::string(what);
}

template <class F>
auto for_flag(std::string_view flag, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw FlagError{e.kind(), std::string(flag), strip_kind(e)};
  }
}

[[noreturn]] void bad_flag(std::string_view flag, const std::string& message,
                           ErrorKind kind = ErrorKind::InvalidArgument) {
  throw FlagError{kind, std::string(flag), message};
}

template <class T>
T env_or(const char* name, T fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  const std::string_view text(raw);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    bad_flag(name, "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

// Flag > environment > built-in default.
template <class T>
void resolve(const CLI::Option* opt, T& value, const char* env, T fallback) {
  if (opt->count() == 0) value = env_or<T>(env, fallback);
}

std::string json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return nlohmann::json(v).dump();
}

ojson number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? ojson("inf") : ojson("-inf");
  return ojson(v);
}

void emit(const std::optional<std::string>& out, std::string_view text) {
  if (out) {
    io::write_text(*out, text);
  } else {
    std::cout << text;
  }
}

void emit_json(const std::optional<std::string>& out, const ojson& doc) { emit(out, doc.dump(2) + "\n"); }

DenseSequence read_dense(const std::string& path) {
  AuSequence seq = io::read_sequence(path);
  if (auto* sparse = std::get_if<SparseSequence>(&seq)) return densify(*sparse);
  return std::get<DenseSequence>(std::move(seq));
}

EmotionTaxonomy load_emotions(const std::string& choice) {
  if (choice == "mead8" || choice == "mead") return EmotionTaxonomy::mead8();
  if (choice == "crema6" || choice == "crema") return EmotionTaxonomy::crema6();
  return for_flag("--emotion-set", [&] { return EmotionTaxonomy::from_json(io::read_text(choice)); });
}

void warn(bool json_mode, const std::string& text) {
  if (json_mode) {
    std::cerr << ojson{{"status", "warning"}, {"message", text}}.dump() << "\n";
  } else {
    std::cerr << "warning: " << text << "\n";
  }
}

std::array<int, 2> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  int w = 0;
  int h = 0;
  if (x == std::string::npos) bad_flag("--size", "expected WxH, got '" + text + "'", ErrorKind::BadDimensions);
  const auto r1 = std::from_chars(text.data(), text.data() + x, w);
  const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), h);
  if (r1.ec != std::errc() || r1.ptr != text.data() + x || r2.ec != std::errc() ||
      r2.ptr != text.data() + text.size()) {
    bad_flag("--size", "expected WxH, got '" + text + "'", ErrorKind::BadDimensions);
  }
  if (w < 8 || h < 8 || w > 8192 || h > 8192) {
    bad_flag("--size", "each side must be between 8 and 8192 pixels", ErrorKind::BadDimensions);
  }
  return {w, h};
}

std::vector<fs::path> sorted_files(const fs::path& dir, std::string_view flag) {
  if (!fs::is_directory(dir)) bad_flag(flag, "'" + dir.string() + "' is not a directory", ErrorKind::IoError);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string frame_name(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", t);
  return buf;
}

// ---------------------------------------------------------------- encode

struct EncodeArgs {
  std::string input;
  double lambda = 0.0;
  int decimals = 2;
  bool tokens = false;
  std::string emotion;
  std::string emotion_set = "mead8";
  std::optional<std::string> out;
  std::optional<std::string> stats;
  CLI::Option* lambda_opt = nullptr;
};

void run_encode(const EncodeArgs& a) {
  CodecConfig cfg{a.lambda, a.decimals};
  for_flag("--lambda", [&] { cfg.validate(); });
  const DenseSequence dense = read_dense(a.input);
  const SparseSequence sparse = sparsify(dense, cfg);

  if (a.stats) {
    const auto s = compression_stats(dense, cfg);
    ojson doc{{"frames", dense.size()},
              {"dense_chars", s.dense_chars},
              {"sparse_chars", s.sparse_chars},
              {"reduction_pct", s.reduction_pct},
              {"mean_active_per_frame", s.mean_active_per_frame},
              {"all_pairs_chars", s.all_pairs_chars}};
    io::write_text(*a.stats, doc.dump(2) + "\n");
  }

  if (a.tokens) {
    if (a.emotion.empty()) bad_flag("--emotion", "--tokens needs an emotion label");
    const auto taxonomy = load_emotions(a.emotion_set);
    const EmotionLabel label = for_flag("--emotion", [&] { return taxonomy.resolve(a.emotion); });
    const std::string text = for_flag(a.input, [&] { return serialize_tokens(label, sparse, cfg); });
    if (a.out) {
      io::write_text(*a.out, text);
    } else {
      std::cout << text << "\n";
    }
    return;
  }

  // Sparse JSON keeps the same quantization as the token text.
  std::vector<SparseAuFrame> frames;
  frames.reserve(sparse.size());
  for (const auto& f : sparse.frames()) {
    std::vector<AuPair> pairs;
    for (const auto& p : f.pairs()) {
      const double q = quantize(p.intensity, cfg.quantize_decimals);
      if (q > cfg.lambda) pairs.push_back({p.index, q});
    }
    frames.emplace_back(std::move(pairs));
  }
  const SparseSequence quantized(sparse.fps(), std::move(frames));
  if (a.out) {
    io::write_sequence(quantized, *a.out);
  } else {
    std::cout << io::sequence_to_json(quantized);
  }
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string input;
  double fps = kTokenFps;
  std::string emotion_set = "mead8";
  std::optional<std::string> out;
  std::optional<std::string> format;
  CLI::Option* fps_opt = nullptr;
};

io::SequenceFormat parse_format(const std::string& text) {
  if (text == "json") return io::SequenceFormat::Json;
  if (text == "binary" || text == "ausq") return io::SequenceFormat::Binary;
  bad_flag("--format", "expected json or binary, got '" + text + "'");
}

void run_decode(DecodeArgs a) {
  resolve(a.fps_opt, a.fps, "AUHEAD_FPS", kTokenFps);
  if (!(a.fps > 0.0) || !std::isfinite(a.fps)) bad_flag("--fps", "must be a positive number");
  const io::Bytes bytes = io::read_bytes(a.input);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_sequence_file = text.starts_with("AUSQ") || (first != std::string_view::npos && text[first] == '{');

  DenseSequence dense;
  if (is_sequence_file) {
    dense = read_dense(a.input);
  } else {
    std::string_view body = text;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
    const auto taxonomy = load_emotions(a.emotion_set);
    dense = densify(deserialize_tokens(body, taxonomy, a.fps).sequence);
  }

  const std::optional<io::SequenceFormat> format =
      a.format ? std::optional(parse_format(*a.format)) : std::nullopt;
  if (a.out) {
    io::write_sequence(dense, *a.out, format);
  } else if (format == io::SequenceFormat::Binary) {
    const auto b = io::sequence_to_binary(dense);
    std::cout.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  } else {
    std::cout << io::sequence_to_json(dense);
  }
}

// ---------------------------------------------------------------- resample

struct ResampleArgs {
  std::string input;
  double gamma = 0.2;
  std::size_t phase = 0;
  std::size_t factor = 0;
  std::size_t target_len = 0;
  std::optional<std::string> out;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* factor_opt = nullptr;
  CLI::Option* target_opt = nullptr;
};

void run_resample(ResampleArgs a) {
  const DenseSequence in = read_dense(a.input);
  DenseSequence out;
  if (a.factor_opt->count() > 0) {
    out = for_flag("--factor", [&] { return upsample_linear(in, a.factor); });
  } else if (a.target_opt->count() > 0) {
    out = for_flag("--target-len", [&] { return resample_to_length(in, a.target_len); });
  } else {
    resolve(a.gamma_opt, a.gamma, "AUHEAD_GAMMA", 0.2);
    const ResampleConfig cfg{a.gamma, a.phase};
    for_flag("--gamma", [&] { (void)cfg.stride(); });
    out = for_flag("--phase", [&] { return downsample(in, cfg); });
  }
  if (a.out) {
    io::write_sequence(out, *a.out);
  } else {
    std::cout << io::sequence_to_json(out);
  }
}

// ---------------------------------------------------------------- prompts

struct PromptsBuildArgs {
  std::string audio_dir;
  std::optional<std::string> au_dir;
  std::optional<std::string> emotions;
  std::string emotion_set = "mead8";
  std::string out;
  bool inference = false;
  double lambda = 0.0;
  int decimals = 2;
  double gamma = 0.2;
  int sample_rate = 16000;
  double fps = kTokenFps;
  std::optional<std::string> template_path;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* fps_opt = nullptr;
};

std::optional<fs::path> find_au_file(const fs::path& dir, const std::string& stem) {
  for (const char* ext : {".json", ".ausq", ".bin"}) {
    fs::path p = dir / (stem + ext);
    if (fs::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

SparseSequence training_sequence(const fs::path& path, const PromptsBuildArgs& a, const CodecConfig& codec) {
  AuSequence seq = io::read_sequence(path);
  if (auto* sparse = std::get_if<SparseSequence>(&seq)) {
    if (std::abs(sparse->fps() - a.fps) > 1e-6) {
      bad_flag("--fps", "sparse AU file '" + path.string() + "' is not at the prompt frame rate");
    }
    return *sparse;
  }
  DenseSequence dense = std::get<DenseSequence>(std::move(seq));
  if (std::abs(dense.fps() - a.fps) > 1e-6) {
    dense = for_flag("--gamma", [&] { return downsample(dense, ResampleConfig{a.gamma, 0}); });
    if (std::abs(dense.fps() - a.fps) > 1e-6) {
      bad_flag("--gamma", "'" + path.string() + "' resamples to " + json_number(dense.fps()) + " fps, not " +
                              json_number(a.fps));
    }
  }
  return sparsify(dense, codec);
}

void run_prompts_build(PromptsBuildArgs a) {
  resolve(a.lambda_opt, a.lambda, "AUHEAD_LAMBDA", 0.0);
  resolve(a.gamma_opt, a.gamma, "AUHEAD_GAMMA", 0.2);
  resolve(a.fps_opt, a.fps, "AUHEAD_FPS", kTokenFps);

  PromptTemplateConfig cfg;
  cfg.sample_rate_hz = a.sample_rate;
  cfg.fps = a.fps;
  cfg.codec = CodecConfig{a.lambda, a.decimals};
  for_flag("--lambda", [&] { cfg.codec.validate(); });
  if (a.template_path) cfg.template_text = io::read_text(*a.template_path);
  for_flag("--sample-rate", [&] { (void)render_instruction(cfg); });

  std::map<std::string, std::string> labels;
  const auto taxonomy = load_emotions(a.emotion_set);
  if (!a.inference) {
    if (!a.au_dir) bad_flag("--au-dir", "training records need AU sequence files");
    if (!a.emotions) bad_flag("--emotions", "training records need an emotion label file");
    try {
      const auto doc = nlohmann::json::parse(io::read_text(*a.emotions));
      for (const auto& [stem, label] : doc.items()) labels[stem] = label.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      bad_flag("--emotions", std::string("expected a JSON object of file stem to label: ") + e.what(),
               ErrorKind::SchemaError);
    }
  }

  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) bad_flag("--out", "cannot open '" + a.out + "' for writing", ErrorKind::IoError);
  std::size_t written = 0;
  for (const auto& audio : sorted_files(a.audio_dir, "--audio-dir")) {
    const std::string stem = audio.stem().string();
    const std::string audio_path = audio.generic_string();
    PromptRecord record;
    if (a.inference) {
      record = build_inference_prompt(audio_path, cfg);
    } else {
      const auto au_path = find_au_file(*a.au_dir, stem);
      if (!au_path) bad_flag("--au-dir", "no AU file for '" + stem + "'", ErrorKind::IoError);
      const auto label = labels.find(stem);
      if (label == labels.end()) bad_flag("--emotions", "no emotion label for '" + stem + "'");
      const SparseSequence seq = training_sequence(*au_path, a, cfg.codec);
      record = for_flag(au_path->string(),
                        [&] { return build_training_record(audio_path, label->second, seq, cfg, taxonomy); });
    }
    out << record.to_jsonl() << '\n';
    ++written;
  }
  out.flush();
  if (!out) bad_flag("--out", "failed writing '" + a.out + "'", ErrorKind::IoError);
  if (written == 0) bad_flag("--audio-dir", "no audio files found", ErrorKind::EmptyInput);
}

struct PromptsParseArgs {
  std::string input;
  std::optional<std::string> out;
  std::optional<std::string> report;
  double fps = kTokenFps;
  std::string emotion_set = "mead8";
  CLI::Option* fps_opt = nullptr;
};

void run_prompts_parse(PromptsParseArgs a, bool json_mode) {
  resolve(a.fps_opt, a.fps, "AUHEAD_FPS", kTokenFps);
  if (!(a.fps > 0.0) || !std::isfinite(a.fps)) bad_flag("--fps", "must be a positive number");
  const auto taxonomy = load_emotions(a.emotion_set);
  const ParseReport r = parse_response(io::read_text(a.input), taxonomy, a.fps);
  for (const auto& w : r.warnings) warn(json_mode, w);

  ojson doc{{"emotion", r.emotion.text},
            {"canonical", r.emotion.canonical},
            {"complete_frames", r.complete_frames},
            {"dropped_suffix", r.dropped_suffix},
            {"warnings", r.warnings}};
  if (a.out) {
    io::write_sequence(r.frames, *a.out);
  } else {
    doc["frames"] = serialize_frames(r.frames);
  }
  if (a.report) {
    emit_json(a.report, doc);
  } else {
    emit_json(std::nullopt, doc);
  }
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string input;
  std::string mode = "rom";
  std::optional<std::string> basis;
  std::string size = "256x256";
  std::optional<std::string> out_dir;
  std::optional<std::string> landmarks;
  std::optional<std::string> stream;
  bool no_clamp = false;
};

void run_render(const RenderArgs& a) {
  const RenderMode mode = for_flag("--mode", [&] { return parse_render_mode(a.mode); });
  const auto [w, h] = parse_size(a.size);
  if (!a.out_dir && !a.landmarks && !a.stream) bad_flag("--out-dir", "give --out-dir, --stream or --landmarks");
  const DisplacementBasis basis = a.basis ? for_flag("--basis", [&] {
    return DisplacementBasis::from_json(io::read_text(*a.basis));
  })
                                          : DisplacementBasis::builtin();
  const DenseSequence seq = read_dense(a.input);
  const auto frames = map_sequence(seq, basis, !a.no_clamp);

  if (a.landmarks) io::write_text(*a.landmarks, io::landmarks_to_json(frames));
  if (a.out_dir) {
    const fs::path dir(*a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) bad_flag("--out-dir", "cannot create '" + dir.string() + "': " + ec.message(), ErrorKind::IoError);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      io::write_bytes(dir / frame_name(t), io::encode_pgm(rasterize(frames[t], w, h, mode)));
    }
  }
  if (a.stream) {
    io::Bytes all;
    for (const auto& f : frames) {
      const auto one = io::encode_pgm(rasterize(f, w, h, mode));
      all.insert(all.end(), one.begin(), one.end());
    }
    io::write_bytes(*a.stream, all);
  }
}

// ---------------------------------------------------------------- embed

struct EmbedArgs {
  std::optional<std::string> input;
  std::optional<std::string> kernel;
  std::size_t n = 2;
  std::string padding = "replicate";
  std::optional<std::string> out;
  std::optional<std::string> init_kernel;
  std::size_t dim = 128;
  std::uint64_t seed = 0;
  double scale = 0.1;
  CLI::Option* n_opt = nullptr;
};

void run_embed(EmbedArgs a) {
  resolve(a.n_opt, a.n, "AUHEAD_N", std::size_t{2});
  if (a.n > 1000) bad_flag("-n", "half-window is unreasonably large");
  EmbeddingConfig cfg;
  cfg.n = a.n;
  cfg.dim = a.dim;
  cfg.padding = for_flag("--padding", [&] { return parse_padding(a.padding); });

  if (a.init_kernel) {
    if (a.dim == 0 || a.dim > 65535) bad_flag("--dim", "must be between 1 and 65535");
    if (!(a.scale >= 0.0) || !std::isfinite(a.scale)) bad_flag("--scale", "must be finite and non-negative");
    io::write_bytes(*a.init_kernel, io::kernel_to_bytes(ConvKernel::random(cfg, a.seed, a.scale)));
    if (!a.input) return;
  }
  if (!a.input) bad_flag("input", "an AU sequence file is required");
  if (!a.kernel && !a.init_kernel) bad_flag("--kernel", "a kernel file is required");
  const ConvKernel kernel =
      for_flag("--kernel", [&] { return io::kernel_from_bytes(io::read_bytes(a.kernel ? *a.kernel : *a.init_kernel)); });
  cfg.dim = kernel.dim();
  if (kernel.window() != cfg.window()) {
    bad_flag("-n", "kernel window " + std::to_string(kernel.window()) + " does not match 2n+1 = " +
                       std::to_string(cfg.window()),
             ErrorKind::ShapeMismatch);
  }
  const auto vectors = embed_sequence(read_dense(*a.input), kernel, cfg);

  std::string text = "{\"dim\": " + std::to_string(cfg.dim) + ", \"n\": " + std::to_string(cfg.n) +
                     ", \"padding\": \"" + a.padding + "\", \"frames\": [";
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    text += t == 0 ? "\n  [" : ",\n  [";
    for (std::size_t d = 0; d < vectors[t].values.size(); ++d) {
      if (d != 0) text += ", ";
      text += json_number(vectors[t].values[d]);
    }
    text += "]";
  }
  text += vectors.empty() ? "]}\n" : "\n]}\n";
  emit(a.out, text);
}

// ---------------------------------------------------------------- guide

struct GuideArgs {
  std::vector<std::string> inputs;
  double s_h = kDefaultAuxGuidanceScale;
  double s_au = kDefaultAuGuidanceScale;
  std::optional<std::string> out;
  CLI::Option* s_h_opt = nullptr;
  CLI::Option* s_au_opt = nullptr;
};

void run_guide(GuideArgs a) {
  resolve(a.s_h_opt, a.s_h, "AUHEAD_S_H", kDefaultAuxGuidanceScale);
  resolve(a.s_au_opt, a.s_au, "AUHEAD_S_AU", kDefaultAuGuidanceScale);
  if (!(a.s_h >= 0.0) || !std::isfinite(a.s_h)) bad_flag("--s-h", "must be finite and non-negative");
  if (!(a.s_au >= 0.0) || !std::isfinite(a.s_au)) bad_flag("--s-au", "must be finite and non-negative");

  std::array<std::vector<float>, 4> v;
  for (std::size_t i = 0; i < 4; ++i) {
    v[i] = for_flag("--inputs", [&] { return io::f32_from_bytes(io::read_bytes(a.inputs[i])); });
  }
  GuidanceInputsF32 in{v[0], v[1], v[2], v[3], static_cast<float>(a.s_h), static_cast<float>(a.s_au)};
  const std::vector<float> out = for_flag("--inputs", [&] { return disentangled_combine(in); });
  if (a.out) {
    io::write_bytes(*a.out, io::f32_to_bytes(out));
  } else {
    for (float x : out) std::printf("%.9g\n", static_cast<double>(x));
  }
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::optional<std::string> out;
  double tau = 0.0;
  std::string mae_mode = "all";
  double peak = 255.0;
  std::string subset = "both";
};

ojson au_report_json(const AuMetricReport& r) {
  return ojson{{"precision", r.precision},
               {"recall", r.recall},
               {"f1", r.f1},
               {"slot_accuracy", r.slot_accuracy},
               {"frame_set_accuracy", r.frame_set_accuracy},
               {"mae", r.mae},
               {"mae_mode", r.mae_mode == MaeMode::AllSlots ? "all" : "active"},
               {"tp", r.tp},
               {"fp", r.fp},
               {"fn", r.fn},
               {"tn", r.tn},
               {"aligned_frames", r.aligned_frames},
               {"length_mismatch", r.length_mismatch},
               {"precision_undefined", r.precision_undefined},
               {"recall_undefined", r.recall_undefined}};
}

void run_eval_au(const EvalArgs& a) {
  AuMetricOptions opt;
  if (!(a.tau >= 0.0 && a.tau < 1.0)) bad_flag("--tau", "must lie in [0, 1)");
  opt.tau = a.tau;
  if (a.mae_mode == "all") {
    opt.mae_mode = MaeMode::AllSlots;
  } else if (a.mae_mode == "active") {
    opt.mae_mode = MaeMode::ActiveSlots;
  } else {
    bad_flag("--mae-mode", "expected all or active, got '" + a.mae_mode + "'");
  }
  emit_json(a.out, au_report_json(au_detection_metrics(read_dense(a.pred), read_dense(a.gt), opt)));
}

std::vector<std::string> read_labels(const std::string& path) {
  std::vector<std::string> labels;
  std::istringstream in(io::read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    labels.push_back(line.substr(b, e - b + 1));
  }
  return labels;
}

void run_eval_emotion(const EvalArgs& a) {
  const auto pred = read_labels(a.pred);
  const auto gt = read_labels(a.gt);
  const double acc = emotion_accuracy(pred, gt);
  emit_json(a.out, ojson{{"accuracy", acc}, {"count", gt.size()}});
}

std::vector<GrayImage> read_pgm_stream(const fs::path& path) { return io::decode_pgm_stream(io::read_bytes(path)); }

ojson image_summary(std::size_t count, const std::function<ImageMetricReport(std::size_t)>& pair) {
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  std::size_t finite = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto r = pair(i);
    if (std::isfinite(r.psnr)) {
      psnr_sum += r.psnr;
      ++finite;
    }
    ssim_sum += r.ssim;
  }
  const double psnr_mean = finite == 0 ? std::numeric_limits<double>::infinity() : psnr_sum / finite;
  return ojson{{"images", count},
               {"identical_images", count - finite},
               {"psnr", number_or_inf(psnr_mean)},
               {"ssim", ssim_sum / static_cast<double>(count)}};
}

void run_eval_image(const EvalArgs& a) {
  if (!(a.peak > 0.0) || !std::isfinite(a.peak)) bad_flag("--peak", "must be a positive number");
  if (!fs::is_directory(a.pred)) {
    const auto pred = read_pgm_stream(a.pred);
    const auto gt = read_pgm_stream(a.gt);
    if (pred.size() != gt.size()) {
      bad_flag("--gt", std::to_string(pred.size()) + " predicted vs " + std::to_string(gt.size()) + " reference images",
               ErrorKind::LengthMismatch);
    }
    if (pred.size() == 1) {
      const auto r = image_metrics(pred[0], gt[0], a.peak);
      emit_json(a.out, ojson{{"psnr", number_or_inf(r.psnr)}, {"ssim", r.ssim}});
      return;
    }
    emit_json(a.out, image_summary(pred.size(), [&](std::size_t i) { return image_metrics(pred[i], gt[i], a.peak); }));
    return;
  }
  const auto pred = sorted_files(a.pred, "--pred");
  const auto gt = sorted_files(a.gt, "--gt");
  if (pred.empty()) bad_flag("--pred", "no images found", ErrorKind::EmptyInput);
  if (pred.size() != gt.size()) {
    bad_flag("--gt", std::to_string(pred.size()) + " predicted vs " + std::to_string(gt.size()) + " reference images",
             ErrorKind::LengthMismatch);
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].filename() != gt[i].filename()) {
      bad_flag("--gt", "no reference image named '" + pred[i].filename().string() + "'", ErrorKind::LengthMismatch);
    }
  }
  emit_json(a.out, image_summary(pred.size(), [&](std::size_t i) {
    return image_metrics(io::decode_pgm(io::read_bytes(pred[i])), io::decode_pgm(io::read_bytes(gt[i])), a.peak);
  }));
}

void run_eval_lmd(const EvalArgs& a) {
  const auto pred = io::landmarks_from_json(io::read_text(a.pred));
  const auto gt = io::landmarks_from_json(io::read_text(a.gt));
  ojson doc;
  if (a.subset == "both" || a.subset == "mouth") doc["m_lmd"] = landmark_distance(pred, gt, LandmarkSubset::Mouth);
  if (a.subset == "both" || a.subset == "face") doc["f_lmd"] = landmark_distance(pred, gt, LandmarkSubset::Face);
  if (doc.empty()) bad_flag("--subset", "expected mouth, face or both, got '" + a.subset + "'");
  doc["frames"] = std::min(pred.size(), gt.size());
  emit_json(a.out, doc);
}

// ---------------------------------------------------------------- info

void run_info() {
  using kernels::Backend;
  ojson backends = ojson::array();
  for (Backend b : {Backend::Scalar, Backend::Avx2}) {
    if (kernels::backend_available(b)) backends.push_back(kernels::to_string(b));
  }
  ojson aus = ojson::array();
  for (const auto& d : AuTaxonomy::builtin().descriptors()) {
    aus.push_back(ojson{{"index", d.index}, {"name", d.name}, {"region", to_string(d.region)}, {"alias", d.alias}});
  }
  ojson emotions = ojson::array();
  for (const auto& c : EmotionTaxonomy::mead8().categories()) emotions.push_back(c.label);
  const ojson doc{{"version", AUHEAD_VERSION},
                  {"simd_backend", kernels::to_string(kernels::active().backend)},
                  {"available_backends", backends},
                  {"defaults",
                   {{"lambda", 0.0},
                    {"gamma", 0.2},
                    {"n", 2},
                    {"s_au", kDefaultAuGuidanceScale},
                    {"s_h", kDefaultAuxGuidanceScale},
                    {"video_fps", kVideoFps},
                    {"token_fps", kTokenFps}}},
                  {"au_count", kNumAus},
                  {"aus", aus},
                  {"emotions", emotions}};
  std::cout << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------- main

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::IoError ? 2 : 1; }

void report(bool json_mode, std::string_view kind, std::string_view flag, const std::string& message, int code) {
  if (json_mode) {
    ojson doc{{"status", "error"}, {"kind", kind}, {"message", message}, {"exit_code", code}};
    if (!flag.empty()) doc["flag"] = flag;
    std::cerr << doc.dump(-1, ' ', false, ojson::error_handler_t::replace) << "\n";
  } else if (flag.empty()) {
    std::cerr << "auhead: " << kind << ": " << message << "\n";
  } else {
    std::cerr << "auhead: " << kind << ": " << flag << ": " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AU data path toolkit: sparse AU codec, prompts, rendering, guidance and metrics", "auhead"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "Machine-readable JSON diagnostics on stderr");
  app.set_version_flag("--version", AUHEAD_VERSION);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Dense AU sequence to sparse JSON or emotion-prefixed token text");
  encode->add_option("input", enc.input, "Dense sequence file (JSON or AUSQ)")->required();
  enc.lambda_opt = encode->add_option("--lambda", enc.lambda, "Sparsity threshold (env AUHEAD_LAMBDA, default 0)");
  encode->add_option("--decimals", enc.decimals, "Quantization decimals")->capture_default_str();
  encode->add_flag("--tokens", enc.tokens, "Emit token text instead of sparse JSON");
  encode->add_option("--emotion", enc.emotion, "Emotion label for --tokens");
  encode->add_option("--emotion-set", enc.emotion_set, "mead8, crema6 or a JSON file")->capture_default_str();
  encode->add_option("--out,-o", enc.out, "Output file (stdout if omitted)");
  encode->add_option("--stats", enc.stats, "Write compression statistics JSON here");

  DecodeArgs dec;
  auto* decode = app.add_subcommand("decode", "Token text or sparse sequence back to a dense sequence");
  decode->add_option("input", dec.input, "Token text or sequence file")->required();
  dec.fps_opt = decode->add_option("--fps", dec.fps, "Frame rate of token text (env AUHEAD_FPS, default 5)");
  decode->add_option("--emotion-set", dec.emotion_set, "mead8, crema6 or a JSON file")->capture_default_str();
  decode->add_option("--out,-o", dec.out, "Output file; .ausq/.bin selects binary");
  decode->add_option("--format", dec.format, "json or binary (overrides the extension)");

  ResampleArgs rs;
  auto* resample = app.add_subcommand("resample", "Decimate, upsample or retime a dense sequence");
  resample->add_option("input", rs.input, "Dense sequence file")->required();
  rs.gamma_opt = resample->add_option("--gamma", rs.gamma, "Rate ratio for decimation (env AUHEAD_GAMMA, default 0.2)");
  resample->add_option("--phase", rs.phase, "First kept frame")->capture_default_str();
  rs.factor_opt = resample->add_option("--factor", rs.factor, "Linear upsampling factor");
  rs.target_opt = resample->add_option("--target-len", rs.target_len, "Interpolate onto this many frames");
  rs.factor_opt->excludes(rs.gamma_opt)->excludes(rs.target_opt);
  rs.target_opt->excludes(rs.gamma_opt);
  resample->add_option("--out,-o", rs.out, "Output file");

  auto* prompts = app.add_subcommand("prompts", "Build instruction corpora and parse model responses");
  prompts->require_subcommand(1);
  PromptsBuildArgs pb;
  auto* build = prompts->add_subcommand("build", "Write one JSONL record per audio file");
  build->add_option("--audio-dir", pb.audio_dir, "Directory of audio files")->required();
  build->add_option("--au-dir", pb.au_dir, "Directory of AU sequence files named after the audio stems");
  build->add_option("--emotions", pb.emotions, "JSON object mapping audio stem to emotion label");
  build->add_option("--emotion-set", pb.emotion_set, "mead8, crema6 or a JSON file")->capture_default_str();
  build->add_option("--out,-o", pb.out, "Corpus file (JSONL)")->required();
  build->add_flag("--inference", pb.inference, "User-only records without answers");
  pb.lambda_opt = build->add_option("--lambda", pb.lambda, "Sparsity threshold (env AUHEAD_LAMBDA)");
  build->add_option("--decimals", pb.decimals, "Quantization decimals")->capture_default_str();
  pb.gamma_opt = build->add_option("--gamma", pb.gamma, "Decimation for dense video-rate AU files (env AUHEAD_GAMMA)");
  build->add_option("--sample-rate", pb.sample_rate, "Audio sample rate in Hz")->capture_default_str();
  pb.fps_opt = build->add_option("--fps", pb.fps, "AU token frame rate (env AUHEAD_FPS, default 5)");
  build->add_option("--template", pb.template_path, "Instruction template file");

  PromptsParseArgs pp;
  auto* parse = prompts->add_subcommand("parse", "Recover emotion and AU frames from a model response");
  parse->add_option("--in,-i", pp.input, "Response text file")->required();
  parse->add_option("--out,-o", pp.out, "Write the recovered sparse sequence here");
  parse->add_option("--report", pp.report, "Write the JSON report here instead of stdout");
  pp.fps_opt = parse->add_option("--fps", pp.fps, "Frame rate of the response (env AUHEAD_FPS, default 5)");
  parse->add_option("--emotion-set", pp.emotion_set, "mead8, crema6 or a JSON file")->capture_default_str();

  RenderArgs rd;
  auto* render = app.add_subcommand("render", "AU sequence to landmarks and PGM line drawings");
  render->add_option("input", rd.input, "AU sequence file")->required();
  render->add_option("--mode", rd.mode, "lmk or rom")->capture_default_str();
  render->add_option("--basis", rd.basis, "Displacement basis JSON");
  render->add_option("--size", rd.size, "Image size WxH")->capture_default_str();
  render->add_option("--out-dir", rd.out_dir, "Directory for frame_NNNNNN.pgm");
  render->add_option("--stream", rd.stream, "Write all frames as one multi-image PGM file");
  render->add_option("--landmarks", rd.landmarks, "Write landmark JSON here");
  render->add_flag("--no-clamp", rd.no_clamp, "Keep coordinates outside the unit square");

  EmbedArgs em;
  auto* embed = app.add_subcommand("embed", "Temporal context-window AU embeddings");
  embed->add_option("input", em.input, "Dense sequence file");
  embed->add_option("--kernel", em.kernel, "AUCK kernel file");
  em.n_opt = embed->add_option("-n", em.n, "Half-window (env AUHEAD_N, default 2)");
  embed->add_option("--padding", em.padding, "replicate or zero")->capture_default_str();
  embed->add_option("--out,-o", em.out, "Output JSON");
  embed->add_option("--init-kernel", em.init_kernel, "Write a seeded random kernel here");
  embed->add_option("--dim", em.dim, "Embedding size for --init-kernel")->capture_default_str();
  embed->add_option("--seed", em.seed, "Seed for --init-kernel")->capture_default_str();
  embed->add_option("--scale", em.scale, "Weight range for --init-kernel")->capture_default_str();

  GuideArgs gd;
  auto* guide = app.add_subcommand("guide", "Disentanglement guidance over four f32 evaluation files");
  guide->add_option("--inputs", gd.inputs, "null-null, H-null, null-AU and H-AU files")->expected(4)->required();
  gd.s_h_opt = guide->add_option("--s-h", gd.s_h, "Auxiliary condition scale (env AUHEAD_S_H, default 1)");
  gd.s_au_opt = guide->add_option("--s-au", gd.s_au, "AU condition scale (env AUHEAD_S_AU, default 3.5)");
  guide->add_option("--out,-o", gd.out, "Output f32 file (values printed if omitted)");

  auto* eval = app.add_subcommand("eval", "Metric reports as JSON");
  eval->require_subcommand(1);
  EvalArgs ev;
  auto add_pair = [&](CLI::App* sub, const char* what) {
    sub->add_option("--pred", ev.pred, std::string("Predicted ") + what)->required();
    sub->add_option("--gt", ev.gt, std::string("Reference ") + what)->required();
    sub->add_option("--out,-o", ev.out, "Report file (stdout if omitted)");
  };
  auto* eval_au = eval->add_subcommand("au", "AU detection and intensity metrics");
  add_pair(eval_au, "AU sequence");
  eval_au->add_option("--tau", ev.tau, "Activity threshold")->capture_default_str();
  eval_au->add_option("--mae-mode", ev.mae_mode, "all or active")->capture_default_str();
  auto* eval_emotion = eval->add_subcommand("emotion", "Emotion label accuracy");
  add_pair(eval_emotion, "labels, one per line");
  auto* eval_image = eval->add_subcommand("image", "PSNR and SSIM of PGM images or directories");
  add_pair(eval_image, "PGM file or directory");
  eval_image->add_option("--peak", ev.peak, "Peak value")->capture_default_str();
  auto* eval_lmd = eval->add_subcommand("lmd", "Mouth and face landmark distances");
  add_pair(eval_lmd, "landmark JSON");
  eval_lmd->add_option("--subset", ev.subset, "mouth, face or both")->capture_default_str();

  auto* info = app.add_subcommand("info", "Build, SIMD backend and taxonomy information");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report(json_mode, "UsageError", "", e.what(), 1);
    if (!json_mode) std::cerr << "run with --help for usage\n";
    return 1;
  }

  try {
    if (encode->parsed()) {
      resolve(enc.lambda_opt, enc.lambda, "AUHEAD_LAMBDA", 0.0);
      run_encode(enc);
    } else if (decode->parsed()) {
      run_decode(dec);
    } else if (resample->parsed()) {
      run_resample(rs);
    } else if (build->parsed()) {
      run_prompts_build(pb);
    } else if (parse->parsed()) {
      run_prompts_parse(pp, json_mode);
    } else if (render->parsed()) {
      run_render(rd);
    } else if (embed->parsed()) {
      run_embed(em);
    } else if (guide->parsed()) {
      run_guide(gd);
    } else if (eval_au->parsed()) {
      run_eval_au(ev);
    } else if (eval_emotion->parsed()) {
      run_eval_emotion(ev);
    } else if (eval_image->parsed()) {
      run_eval_image(ev);
    } else if (eval_lmd->parsed()) {
      run_eval_lmd(ev);
    } else if (info->parsed()) {
      run_info();
    }
    std::cout.flush();
    if (!std::cout) {
      report(json_mode, "IoError", "", "failed writing to stdout", 2);
      return 2;
    }
  } catch (const FlagError& e) {
    const int code = exit_code_for(e.kind);
    report(json_mode, to_string(e.kind), e.flag, e.message, code);
    return code;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(json_mode, to_string(e.kind()), "", strip_kind(e), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    report(json_mode, "IoError", "", e.what(), 2);
    return 2;
  } catch (const std::bad_alloc&) {
    report(json_mode, "ResourceError", "", "out of memory", 1);
    return 1;
  } catch (const std::exception& e) {
    report(json_mode, "InternalError", "", e.what(), 1);
    return 1;
  }
  return 0;
}
