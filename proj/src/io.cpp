#include "auhead/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "json.hpp"

namespace auhead::io {

namespace {

constexpr std::string_view kSequenceMagic = "AUSQ";
constexpr std::string_view kKernelMagic = "AUCK";
constexpr std::size_t kSequenceHeader = 4 + 1 + 4 + 2 + 4;
constexpr std::size_t kKernelHeader = 4 + 1 + 2 + 2 + 2;

class Writer {
 public:
  void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  Bytes take() { return std::move(bytes_); }

 private:
  Bytes bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const noexcept { return bytes_.size() - pos_ >= n; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  bool magic(std::string_view m) {
    if (!has(m.size())) return false;
    const bool ok = std::equal(m.begin(), m.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                               [](char c, std::uint8_t b) { return static_cast<std::uint8_t>(c) == b; });
    pos_ += m.size();
    return ok;
  }
  std::uint8_t u8() { return bytes_[pos_++]; }
  std::uint16_t u16() {
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Shortest round-trip form, with ".0" kept on integral values as JSON writers do.
std::string number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, r.ptr);
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

[[noreturn]] void corrupt(const std::string& what) { fail(ErrorKind::CorruptFile, what); }

std::uint16_t checked_u16(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint16_t>::max()) fail(ErrorKind::SchemaError, std::string(what) + " exceeds 65535");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

Bytes read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::IoError, "failed reading '" + path.string() + "'");
  return bytes;
}

std::string read_text(const std::filesystem::path& path) {
  const Bytes bytes = read_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::IoError, "failed writing '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

SequenceFormat format_for_path(const std::filesystem::path& path) {
  const std::string ext = to_lower_ascii(path.extension().string());
  return (ext == ".ausq" || ext == ".bin") ? SequenceFormat::Binary : SequenceFormat::Json;
}

std::string sequence_to_json(const AuSequence& seq) {
  std::string out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        constexpr bool dense = std::is_same_v<S, DenseSequence>;
        out = "{\"fps\": " + number(s.fps()) + ", \"n_units\": 24, \"representation\": \"" +
              (dense ? "dense" : "sparse") + "\", \"frames\": [";
        for (std::size_t t = 0; t < s.size(); ++t) {
          out += t == 0 ? "\n  [" : ",\n  [";
          if constexpr (dense) {
            for (std::size_t i = 0; i < kNumAus; ++i) {
              if (i != 0) out += ", ";
              out += number(s[t][i]);
            }
          } else {
            bool first = true;
            for (const auto& p : s[t].pairs()) {
              if (!first) out += ", ";
              first = false;
              out += "[" + std::to_string(p.index) + ", " + number(p.intensity) + "]";
            }
          }
          out += "]";
        }
        out += s.empty() ? "]}\n" : "\n]}\n";
      },
      seq);
  return out;
}

AuSequence sequence_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("sequence file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) fail(ErrorKind::SchemaError, "sequence JSON must be an object");
    const int n_units = doc.at("n_units").get<int>();
    if (n_units != static_cast<int>(kNumAus)) {
      fail(ErrorKind::SchemaError, "n_units is " + std::to_string(n_units) + ", expected 24");
    }
    const double fps = doc.at("fps").get<double>();
    const std::string representation = doc.at("representation").get<std::string>();
    const auto& frames = doc.at("frames");
    if (!frames.is_array()) fail(ErrorKind::SchemaError, "frames must be a list");

    if (representation == "dense") {
      std::vector<AuVector> out;
      out.reserve(frames.size());
      for (const auto& f : frames) out.push_back(validate_dense(f.get<std::vector<double>>()));
      return DenseSequence(fps, std::move(out));
    }
    if (representation == "sparse") {
      std::vector<SparseAuFrame> out;
      out.reserve(frames.size());
      for (const auto& f : frames) {
        std::vector<AuPair> pairs;
        for (const auto& p : f) {
          if (!p.is_array() || p.size() != 2) fail(ErrorKind::SchemaError, "sparse pairs must be [index, value]");
          pairs.push_back({p[0].get<int>(), p[1].get<double>()});
        }
        out.emplace_back(std::move(pairs));
      }
      return SparseSequence(fps, std::move(out));
    }
    fail(ErrorKind::SchemaError, "representation must be 'dense' or 'sparse'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed sequence JSON: ") + e.what());
  }
}

Bytes sequence_to_binary(const AuSequence& seq) {
  const auto* dense = std::get_if<DenseSequence>(&seq);
  if (dense == nullptr) fail(ErrorKind::SchemaError, "the binary sequence format stores dense sequences only");
  if (dense->size() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::SchemaError, "too many frames for the binary format");
  }
  Writer w;
  w.magic(kSequenceMagic);
  w.u8(kSequenceVersion);
  w.f32(static_cast<float>(dense->fps()));
  w.u16(static_cast<std::uint16_t>(kNumAus));
  w.u32(static_cast<std::uint32_t>(dense->size()));
  for (const auto& f : dense->frames()) {
    for (double v : f.values()) w.f32(static_cast<float>(v));
  }
  return w.take();
}

DenseSequence sequence_from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSequenceHeader) corrupt("binary sequence is shorter than its header");
  Reader r(bytes);
  if (!r.magic(kSequenceMagic)) corrupt("bad magic, expected AUSQ");
  const std::uint8_t version = r.u8();
  if (version != kSequenceVersion) corrupt("unsupported AUSQ version " + std::to_string(version));
  const float fps = r.f32();
  const std::uint16_t n_units = r.u16();
  const std::uint32_t n_frames = r.u32();
  if (n_units != kNumAus) fail(ErrorKind::SchemaError, "n_units is " + std::to_string(n_units) + ", expected 24");
  const std::uint64_t expected = 4ULL * n_units * n_frames;
  if (r.remaining() != expected) {
    corrupt("payload is " + std::to_string(r.remaining()) + " bytes, header promises " + std::to_string(expected));
  }
  std::vector<AuVector> frames;
  frames.reserve(n_frames);
  for (std::uint32_t t = 0; t < n_frames; ++t) {
    AuVector::Storage values{};
    for (auto& v : values) v = r.f32();
    frames.emplace_back(values);
  }
  return DenseSequence(fps, std::move(frames));
}

AuSequence sequence_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::equal(kSequenceMagic.begin(), kSequenceMagic.end(), bytes.begin(),
                                      [](char c, std::uint8_t b) { return static_cast<std::uint8_t>(c) == b; })) {
    return sequence_from_binary(bytes);
  }
  return sequence_from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

AuSequence read_sequence(const std::filesystem::path& path) { return sequence_from_bytes(read_bytes(path)); }

void write_sequence(const AuSequence& seq, const std::filesystem::path& path, std::optional<SequenceFormat> format) {
  if (format.value_or(format_for_path(path)) == SequenceFormat::Binary) {
    write_bytes(path, sequence_to_binary(seq));
  } else {
    write_text(path, sequence_to_json(seq));
  }
}

Bytes kernel_to_bytes(const ConvKernel& kernel) {
  Writer w;
  w.magic(kKernelMagic);
  w.u8(kKernelVersion);
  w.u16(checked_u16(kernel.dim(), "kernel dim"));
  w.u16(checked_u16(kernel.window(), "kernel window"));
  w.u16(static_cast<std::uint16_t>(kNumAus));
  for (double v : kernel.weights()) w.f32(static_cast<float>(v));
  for (double v : kernel.bias()) w.f32(static_cast<float>(v));
  return w.take();
}

ConvKernel kernel_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kKernelHeader) corrupt("kernel file is shorter than its header");
  Reader r(bytes);
  if (!r.magic(kKernelMagic)) corrupt("bad magic, expected AUCK");
  const std::uint8_t version = r.u8();
  if (version != kKernelVersion) corrupt("unsupported AUCK version " + std::to_string(version));
  const std::size_t dim = r.u16();
  const std::size_t window = r.u16();
  const std::size_t n_units = r.u16();
  if (n_units != kNumAus) fail(ErrorKind::ShapeMismatch, "kernel n_units is " + std::to_string(n_units));
  const std::size_t weight_count = dim * window * n_units;
  if (r.remaining() != 4 * (weight_count + dim)) corrupt("kernel payload length does not match its header");
  std::vector<double> weights(weight_count);
  for (auto& v : weights) v = r.f32();
  std::vector<double> bias(dim);
  for (auto& v : bias) v = r.f32();
  return ConvKernel(dim, window, std::move(weights), std::move(bias));
}

Bytes encode_pgm(const GrayImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

namespace {

// Parses one P5 image starting at `pos` and leaves `pos` just past its pixels.
GrayImage decode_pgm_at(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long long {
    skip_space();
    long long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && digits < 10) {
      v = v * 10 + (bytes[pos++] - '0');
      ++digits;
    }
    if (digits == 0) corrupt("malformed PGM header");
    return v;
  };
  if (bytes.size() - pos < 2 || bytes[pos] != 'P' || bytes[pos + 1] != '5') corrupt("not a binary PGM (P5) image");
  pos += 2;
  const long long width = read_int();
  const long long height = read_int();
  const long long maxval = read_int();
  if (maxval < 1 || maxval > 255) corrupt("only 8-bit PGM images are supported");
  if (width < 1 || height < 1 || width * height > (1LL << 28)) corrupt("PGM dimensions are out of range");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) corrupt("malformed PGM header");
  ++pos;
  const auto n = static_cast<std::size_t>(width * height);
  if (bytes.size() - pos < n) corrupt("PGM pixel data is truncated");
  GrayImage image(static_cast<int>(width), static_cast<int>(height));
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), n, image.pixels.begin());
  pos += n;
  return image;
}

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  return decode_pgm_at(bytes, pos);
}

std::vector<GrayImage> decode_pgm_stream(std::span<const std::uint8_t> bytes) {
  std::vector<GrayImage> images;
  std::size_t pos = 0;
  do {
    images.push_back(decode_pgm_at(bytes, pos));
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
  } while (pos < bytes.size());
  return images;
}

std::string landmarks_to_json(std::span<const LandmarkFrame> frames) {
  std::string out = "[";
  for (std::size_t f = 0; f < frames.size(); ++f) {
    out += f == 0 ? "\n  [" : ",\n  [";
    for (std::size_t p = 0; p < kNumLandmarks; ++p) {
      if (p != 0) out += ", ";
      out += "[" + number(frames[f].points[p].x) + ", " + number(frames[f].points[p].y) + "]";
    }
    out += "]";
  }
  out += frames.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<LandmarkFrame> landmarks_from_json(std::string_view text) {
  std::vector<LandmarkFrame> frames;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) fail(ErrorKind::SchemaError, "landmark file must be a list of frames");
    for (const auto& f : doc) {
      if (!f.is_array() || f.size() != kNumLandmarks) {
        fail(ErrorKind::SchemaError, "every landmark frame must hold 68 points");
      }
      LandmarkFrame frame;
      for (std::size_t p = 0; p < kNumLandmarks; ++p) {
        if (!f[p].is_array() || f[p].size() != 2) fail(ErrorKind::SchemaError, "landmark points must be [x, y]");
        frame.points[p] = {f[p][0].get<double>(), f[p][1].get<double>()};
        if (!std::isfinite(frame.points[p].x) || !std::isfinite(frame.points[p].y)) {
          fail(ErrorKind::SchemaError, "landmark coordinates must be finite");
        }
      }
      frames.push_back(frame);
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("malformed landmark JSON: ") + e.what());
  }
  return frames;
}

Bytes f32_to_bytes(std::span<const float> values) {
  Writer w;
  for (float v : values) w.f32(v);
  return w.take();
}

std::vector<float> f32_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) corrupt("f32 vector file length is not a multiple of 4");
  Reader r(bytes);
  std::vector<float> out(bytes.size() / 4);
  for (auto& v : out) v = r.f32();
  return out;
}

}  // namespace auhead::io
