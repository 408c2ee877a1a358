#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "auhead/error.hpp"

namespace auhead {

inline constexpr std::size_t kNumAus = 24;

/// One frame of dense AU intensities. Always 24 values in [0, 1].
class AuVector {
 public:
  using Storage = std::array<double, kNumAus>;

  AuVector() noexcept : values_{} {}
  /// Throws ValueOutOfRange on the first value outside [0, 1] (or NaN).
  explicit AuVector(const Storage& values);

  const Storage& values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double, kNumAus> span() const noexcept { return values_; }

  bool is_neutral() const noexcept;

  friend bool operator==(const AuVector&, const AuVector&) = default;

 private:
  Storage values_;
};

/// Validates an arbitrary list of intensities into an AuVector.
AuVector validate_dense(std::span<const double> values);

struct AuPair {
  int index = 0;
  double intensity = 0.0;

  friend bool operator==(const AuPair&, const AuPair&) = default;
};

/// Sparse index-intensity pairs with strictly increasing indices.
class SparseAuFrame {
 public:
  SparseAuFrame() = default;
  /// Throws BadIndex, BadIntensity or ParseError (unordered / duplicate indices).
  explicit SparseAuFrame(std::vector<AuPair> pairs);

  const std::vector<AuPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  friend bool operator==(const SparseAuFrame&, const SparseAuFrame&) = default;

 private:
  std::vector<AuPair> pairs_;
};

enum class Representation { Dense, Sparse };

std::string_view to_string(Representation r) noexcept;

/// Frames sampled at a fixed rate. `Frame` is AuVector or SparseAuFrame.
template <class Frame>
class BasicSequence {
 public:
  BasicSequence() = default;
  BasicSequence(double fps, std::vector<Frame> frames) : fps_(fps), frames_(std::move(frames)) {
    if (!std::isfinite(fps_) || fps_ <= 0.0) {
      fail(ErrorKind::InvalidArgument, "fps must be a finite positive number");
    }
  }

  double fps() const noexcept { return fps_; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  const Frame& operator[](std::size_t i) const noexcept { return frames_[i]; }

  friend bool operator==(const BasicSequence&, const BasicSequence&) = default;

 private:
  double fps_ = 25.0;
  std::vector<Frame> frames_;
};

using DenseSequence = BasicSequence<AuVector>;
using SparseSequence = BasicSequence<SparseAuFrame>;
using AuSequence = std::variant<DenseSequence, SparseSequence>;

Representation representation_of(const AuSequence& seq) noexcept;

enum class FaceRegion { Eyes, Brows, Jaw, Lips, Cheeks, Nose, Chin };

std::string_view to_string(FaceRegion r) noexcept;
FaceRegion parse_region(std::string_view text);

struct AuDescriptor {
  int index = 0;
  std::string name;
  FaceRegion region = FaceRegion::Eyes;
  /// 1-based FEAFA naming, e.g. "AU9: Jaw Drop" for index 8.
  std::string alias;
};

/// The 24 AU descriptors in canonical 0-based order.
class AuTaxonomy {
 public:
  /// Parses the taxonomy JSON (list of {index, name, region, alias}).
  static AuTaxonomy from_json(std::string_view json_text);
  /// The embedded default copy.
  static const AuTaxonomy& builtin();

  const AuDescriptor& at(int index) const;
  const std::vector<AuDescriptor>& descriptors() const noexcept { return descriptors_; }

 private:
  std::vector<AuDescriptor> descriptors_;
};

/// Descriptor from the built-in taxonomy. IndexOutOfRange outside 0..23.
const AuDescriptor& au_metadata(int index);

struct EmotionLabel {
  /// Lowercased spelling as written (what gets serialized).
  std::string text;
  /// Taxonomy label the spelling resolved to.
  std::string canonical;

  friend bool operator==(const EmotionLabel&, const EmotionLabel&) = default;
};

/// Configurable set of emotion categories. Each category accepts a few
/// spellings ("surprised" also matches "surprise").
class EmotionTaxonomy {
 public:
  struct Category {
    std::string label;
    std::vector<std::string> spellings;
  };

  explicit EmotionTaxonomy(std::vector<Category> categories);

  static const EmotionTaxonomy& mead8();
  static const EmotionTaxonomy& crema6();
  /// Accepts a JSON list of labels, or of {"label", "spellings"} objects.
  static EmotionTaxonomy from_json(std::string_view json_text);

  /// Case-insensitive lookup; throws UnknownEmotion.
  EmotionLabel resolve(std::string_view text) const;
  bool contains(std::string_view text) const noexcept;

  const std::vector<Category>& categories() const noexcept { return categories_; }

 private:
  std::vector<Category> categories_;
};

std::string to_lower_ascii(std::string_view text);

}  // namespace auhead
