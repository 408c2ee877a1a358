#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "auhead/au_core.hpp"

namespace auhead {

inline constexpr std::size_t kNumLandmarks = 68;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// 68 iBUG-ordered points in the unit square, y pointing down.
/// jaw 0-16, brows 17-26, nose 27-35, eyes 36-47, outer lip 48-59, inner lip 60-67.
struct LandmarkFrame {
  std::array<Point2, kNumLandmarks> points{};

  friend bool operator==(const LandmarkFrame&, const LandmarkFrame&) = default;
};

/// 8-bit grayscale, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t lit_count() const noexcept;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Rasterized landmark drawings: background 0, foreground 255.
using RasterImage = GrayImage;

struct Displacement {
  int point = 0;
  double dx = 0.0;
  double dy = 0.0;

  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Unit-intensity landmark displacements per AU. The model is linear: an AU
/// at intensity v moves each listed point by v * (dx, dy).
class DisplacementBasis {
 public:
  using Entries = std::array<std::vector<Displacement>, kNumAus>;

  DisplacementBasis() = default;
  /// Throws SchemaError for point indices outside 0..67 or non-finite offsets.
  explicit DisplacementBasis(Entries entries);

  static const DisplacementBasis& builtin();
  /// {"<au index>": [[point, dx, dy], ...], ...}; missing AUs are empty.
  static DisplacementBasis from_json(std::string_view json_text);
  std::string to_json() const;

  const std::vector<Displacement>& for_au(std::size_t au) const { return entries_.at(au); }
  const Entries& entries() const noexcept { return entries_; }

 private:
  Entries entries_{};
};

/// Landmark indices each facial region may move. Regions overlap: the jaw
/// carries the lips with it, the chin and cheeks sit on the jaw contour.
std::span<const int> region_points(FaceRegion region);

/// True if every AU only displaces points inside its region's footprint.
bool respects_regions(const DisplacementBasis& basis, const AuTaxonomy& taxonomy = AuTaxonomy::builtin());

/// Neutral, bilaterally symmetric face about x = 0.5.
const LandmarkFrame& canonical_template();

/// Mirror partner of each landmark under x -> 1 - x.
int mirror_index(int point);

LandmarkFrame apply_aus(const LandmarkFrame& base, const DisplacementBasis& basis, const AuVector& frame,
                        bool clamp = true);

std::vector<LandmarkFrame> map_sequence(const DenseSequence& seq, const DisplacementBasis& basis, bool clamp = true,
                                        const LandmarkFrame& base = canonical_template());

enum class RenderMode { Lmk, Rom };

RenderMode parse_render_mode(std::string_view text);

/// A chain of landmark indices drawn as connected segments.
struct Polyline {
  std::vector<int> points;
  bool closed = false;
};

/// Jaw, both brows and the nose open; both eyes and both lip contours closed.
std::span<const Polyline> face_polylines();

/// Nearest pixel of a unit-square coordinate; nullopt for non-finite points.
std::optional<std::array<int, 2>> to_pixel(const Point2& p, int width, int height);

/// Integer Bresenham line, endpoints included; off-image pixels are skipped.
void draw_line(RasterImage& image, int x0, int y0, int x1, int y1);

RasterImage rasterize_polylines(const LandmarkFrame& frame, int width, int height, std::span<const Polyline> lines);

/// lmk: one pixel per landmark. rom: the face polylines. Throws BadDimensions
/// when either side is below 8 pixels.
RasterImage rasterize(const LandmarkFrame& frame, int width, int height, RenderMode mode);

}  // namespace auhead
