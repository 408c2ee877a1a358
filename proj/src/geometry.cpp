#include "auhead/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "auhead/embedded_data.hpp"
#include "json.hpp"

namespace auhead {

namespace {

// Image-left half of the neutral face plus the midline; the rest is mirrored.
struct SeedPoint {
  int index;
  double x;
  double y;
};

constexpr SeedPoint kSeed[] = {
    // jaw
    {0, 0.100, 0.300}, {1, 0.108, 0.420}, {2, 0.128, 0.540}, {3, 0.160, 0.650}, {4, 0.208, 0.752},
    {5, 0.278, 0.840}, {6, 0.358, 0.910}, {7, 0.435, 0.955}, {8, 0.500, 0.968},
    // left brow
    {17, 0.170, 0.220}, {18, 0.228, 0.182}, {19, 0.298, 0.172}, {20, 0.368, 0.182}, {21, 0.430, 0.210},
    // nose bridge and base
    {27, 0.500, 0.300}, {28, 0.500, 0.378}, {29, 0.500, 0.455}, {30, 0.500, 0.532},
    {31, 0.432, 0.590}, {32, 0.464, 0.603}, {33, 0.500, 0.612},
    // left eye
    {36, 0.218, 0.322}, {37, 0.262, 0.293}, {38, 0.312, 0.292}, {39, 0.360, 0.325}, {40, 0.312, 0.342},
    {41, 0.262, 0.342},
    // outer lip
    {48, 0.362, 0.742}, {49, 0.402, 0.712}, {50, 0.458, 0.695}, {51, 0.500, 0.702},
    {57, 0.500, 0.820}, {58, 0.452, 0.812}, {59, 0.402, 0.792},
    // inner lip
    {60, 0.380, 0.742}, {61, 0.450, 0.733}, {62, 0.500, 0.738}, {66, 0.500, 0.758}, {67, 0.450, 0.755},
};

constexpr int kMirror[kNumLandmarks] = {
    16, 15, 14, 13, 12, 11, 10, 9,  8,  7,  6,  5,  4,  3,  2,  1,  0,   // jaw
    26, 25, 24, 23, 22, 21, 20, 19, 18, 17,                              // brows
    27, 28, 29, 30, 35, 34, 33, 32, 31,                                  // nose
    45, 44, 43, 42, 47, 46, 39, 38, 37, 36, 41, 40,                      // eyes
    54, 53, 52, 51, 50, 49, 48, 59, 58, 57, 56, 55,                      // outer lip
    64, 63, 62, 61, 60, 67, 66, 65,                                      // inner lip
};

LandmarkFrame build_template() {
  LandmarkFrame frame;
  std::array<bool, kNumLandmarks> set{};
  for (const auto& s : kSeed) {
    frame.points[s.index] = {s.x, s.y};
    set[s.index] = true;
  }
  for (std::size_t i = 0; i < kNumLandmarks; ++i) {
    if (set[i]) continue;
    const Point2 src = frame.points[kMirror[i]];
    frame.points[i] = {1.0 - src.x, src.y};
  }
  return frame;
}

template <int First, int Last>
constexpr std::array<int, Last - First + 1> iota_points() {
  std::array<int, Last - First + 1> out{};
  for (int i = First; i <= Last; ++i) out[i - First] = i;
  return out;
}

constexpr auto kEyes = iota_points<36, 47>();
constexpr auto kBrows = iota_points<17, 26>();
constexpr auto kNose = iota_points<27, 35>();
constexpr auto kLips = iota_points<48, 67>();
constexpr auto kCheeks = iota_points<1, 15>();

constexpr auto kJaw = [] {
  std::array<int, 17 + 20> out{};
  for (int i = 0; i <= 16; ++i) out[i] = i;
  for (int i = 48; i <= 67; ++i) out[17 + i - 48] = i;
  return out;
}();

constexpr int kChin[] = {5, 6, 7, 8, 9, 10, 11, 55, 56, 57, 58, 59, 65, 66, 67};

std::vector<Polyline> build_polylines() {
  auto chain = [](int first, int last, bool closed) {
    Polyline p;
    for (int i = first; i <= last; ++i) p.points.push_back(i);
    p.closed = closed;
    return p;
  };
  return {
      chain(0, 16, false),  chain(17, 21, false), chain(22, 26, false), chain(27, 30, false),
      chain(31, 35, false), chain(36, 41, true),  chain(42, 47, true),  chain(48, 59, true),
      chain(60, 67, true),
  };
}

void require_dimensions(int width, int height) {
  if (width < 8 || height < 8) {
    fail(ErrorKind::BadDimensions,
         "raster size " + std::to_string(width) + "x" + std::to_string(height) + " is below 8x8");
  }
  if (static_cast<long long>(width) * height > (1LL << 28)) {
    fail(ErrorKind::BadDimensions, "raster size is too large");
  }
}

void plot(RasterImage& image, int x, int y) {
  if (x < 0 || y < 0 || x >= image.width || y >= image.height) return;
  image.pixels[static_cast<std::size_t>(y) * image.width + x] = 255;
}

}  // namespace

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 0 || h < 0) fail(ErrorKind::BadDimensions, "image dimensions must be non-negative");
  pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

std::size_t GrayImage::lit_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(pixels.begin(), pixels.end(), [](std::uint8_t p) { return p != 0; }));
}

DisplacementBasis::DisplacementBasis(Entries entries) : entries_(std::move(entries)) {
  for (std::size_t au = 0; au < kNumAus; ++au) {
    for (const auto& d : entries_[au]) {
      if (d.point < 0 || d.point >= static_cast<int>(kNumLandmarks)) {
        fail(ErrorKind::SchemaError,
             "basis entry for AU " + std::to_string(au) + " names landmark " + std::to_string(d.point));
      }
      if (!std::isfinite(d.dx) || !std::isfinite(d.dy)) {
        fail(ErrorKind::SchemaError, "basis entry for AU " + std::to_string(au) + " is not finite");
      }
    }
  }
}

const DisplacementBasis& DisplacementBasis::builtin() {
  static const DisplacementBasis basis = from_json(embedded::default_basis);
  return basis;
}

DisplacementBasis DisplacementBasis::from_json(std::string_view json_text) {
  Entries entries{};
  try {
    const auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) fail(ErrorKind::SchemaError, "basis must be a JSON object keyed by AU index");
    for (const auto& [key, list] : doc.items()) {
      std::size_t consumed = 0;
      int au = -1;
      try {
        au = std::stoi(key, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != key.size() || au < 0 || au >= static_cast<int>(kNumAus)) {
        fail(ErrorKind::SchemaError, "basis key '" + key + "' is not an AU index 0..23");
      }
      for (const auto& triple : list) {
        if (!triple.is_array() || triple.size() != 3) {
          fail(ErrorKind::SchemaError, "basis entries must be [point_index, dx, dy]");
        }
        entries[au].push_back({triple[0].get<int>(), triple[1].get<double>(), triple[2].get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed basis file: ") + e.what());
  }
  return DisplacementBasis(std::move(entries));
}

std::string DisplacementBasis::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (std::size_t au = 0; au < kNumAus; ++au) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& d : entries_[au]) list.push_back({d.point, d.dx, d.dy});
    doc[std::to_string(au)] = std::move(list);
  }
  return doc.dump(2);
}

std::span<const int> region_points(FaceRegion region) {
  switch (region) {
    case FaceRegion::Eyes: return kEyes;
    case FaceRegion::Brows: return kBrows;
    case FaceRegion::Nose: return kNose;
    case FaceRegion::Lips: return kLips;
    case FaceRegion::Jaw: return kJaw;
    case FaceRegion::Cheeks: return kCheeks;
    case FaceRegion::Chin: return kChin;
  }
  return {};
}

bool respects_regions(const DisplacementBasis& basis, const AuTaxonomy& taxonomy) {
  for (std::size_t au = 0; au < kNumAus; ++au) {
    const auto allowed = region_points(taxonomy.at(static_cast<int>(au)).region);
    for (const auto& d : basis.for_au(au)) {
      if (std::find(allowed.begin(), allowed.end(), d.point) == allowed.end()) return false;
    }
  }
  return true;
}

const LandmarkFrame& canonical_template() {
  static const LandmarkFrame frame = build_template();
  return frame;
}

int mirror_index(int point) {
  if (point < 0 || point >= static_cast<int>(kNumLandmarks)) {
    fail(ErrorKind::IndexOutOfRange, "landmark index " + std::to_string(point) + " outside 0..67");
  }
  return kMirror[point];
}

LandmarkFrame apply_aus(const LandmarkFrame& base, const DisplacementBasis& basis, const AuVector& frame, bool clamp) {
  LandmarkFrame out = base;
  for (std::size_t au = 0; au < kNumAus; ++au) {
    const double v = frame[au];
    if (v == 0.0) continue;
    for (const auto& d : basis.for_au(au)) {
      out.points[d.point].x += v * d.dx;
      out.points[d.point].y += v * d.dy;
    }
  }
  if (clamp) {
    for (auto& p : out.points) {
      p.x = std::clamp(p.x, 0.0, 1.0);
      p.y = std::clamp(p.y, 0.0, 1.0);
    }
  }
  return out;
}

std::vector<LandmarkFrame> map_sequence(const DenseSequence& seq, const DisplacementBasis& basis, bool clamp,
                                        const LandmarkFrame& base) {
  if (seq.empty()) fail(ErrorKind::EmptySequence, "cannot map an empty sequence to landmarks");
  std::vector<LandmarkFrame> out;
  out.reserve(seq.size());
  for (const auto& f : seq.frames()) out.push_back(apply_aus(base, basis, f, clamp));
  return out;
}

RenderMode parse_render_mode(std::string_view text) {
  if (text == "lmk") return RenderMode::Lmk;
  if (text == "rom") return RenderMode::Rom;
  fail(ErrorKind::InvalidArgument, "render mode must be 'lmk' or 'rom'");
}

std::span<const Polyline> face_polylines() {
  static const std::vector<Polyline> lines = build_polylines();
  return lines;
}

std::optional<std::array<int, 2>> to_pixel(const Point2& p, int width, int height) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
  // Far off-image points are pulled in to just past the border so line
  // drawing stays bounded; the clipped part is never visible anyway.
  const double x = std::clamp(p.x, -1.0, 2.0);
  const double y = std::clamp(p.y, -1.0, 2.0);
  return std::array<int, 2>{static_cast<int>(std::lround(x * (width - 1))),
                            static_cast<int>(std::lround(y * (height - 1)))};
}

void draw_line(RasterImage& image, int x0, int y0, int x1, int y1) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    plot(image, x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

RasterImage rasterize_polylines(const LandmarkFrame& frame, int width, int height, std::span<const Polyline> lines) {
  require_dimensions(width, height);
  RasterImage image(width, height);
  for (const auto& line : lines) {
    const std::size_t n = line.points.size();
    if (n == 1) {
      if (const auto p = to_pixel(frame.points.at(line.points[0]), width, height)) plot(image, (*p)[0], (*p)[1]);
    }
    const std::size_t segments = line.closed && n > 2 ? n : (n == 0 ? 0 : n - 1);
    for (std::size_t s = 0; s < segments; ++s) {
      const auto a = to_pixel(frame.points.at(line.points[s]), width, height);
      const auto b = to_pixel(frame.points.at(line.points[(s + 1) % n]), width, height);
      if (!a || !b) continue;
      draw_line(image, (*a)[0], (*a)[1], (*b)[0], (*b)[1]);
    }
  }
  return image;
}

RasterImage rasterize(const LandmarkFrame& frame, int width, int height, RenderMode mode) {
  require_dimensions(width, height);
  if (mode == RenderMode::Rom) return rasterize_polylines(frame, width, height, face_polylines());
  RasterImage image(width, height);
  for (const auto& p : frame.points) {
    if (const auto px = to_pixel(p, width, height)) plot(image, (*px)[0], (*px)[1]);
  }
  return image;
}

}  // namespace auhead
