#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "auhead/au_core.hpp"
#include "auhead/geometry.hpp"

namespace auhead {

enum class MaeMode {
  /// Mean over all 24 dimensions of every aligned frame.
  AllSlots,
  /// Mean over slots active in the prediction or the ground truth.
  ActiveSlots,
};

struct AuMetricOptions {
  /// A slot counts as active iff its value is strictly greater than tau.
  double tau = 0.0;
  MaeMode mae_mode = MaeMode::AllSlots;
};

struct AuMetricReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double slot_accuracy = 0.0;
  double frame_set_accuracy = 0.0;
  double mae = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t aligned_frames = 0;
  std::size_t length_mismatch = 0;
  /// Set when there were no predicted (resp. ground-truth) positives and the
  /// value was reported as 0 by convention.
  bool precision_undefined = false;
  bool recall_undefined = false;
  MaeMode mae_mode = MaeMode::AllSlots;

  friend bool operator==(const AuMetricReport&, const AuMetricReport&) = default;
};

/// Micro-averaged slot detection metrics over the frames both sequences
/// share (the longer one is truncated). Throws EmptySequence.
AuMetricReport au_detection_metrics(const DenseSequence& pred, const DenseSequence& gt,
                                    const AuMetricOptions& options = {});

/// Fraction of case-insensitive label matches. Throws EmptyInput or LengthMismatch.
double emotion_accuracy(std::span<const std::string> pred, std::span<const std::string> gt);

/// 10 log10(peak^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& a, const GrayImage& b, double peak = 255.0);

/// Mean SSIM over all 11x11 Gaussian (sigma 1.5) windows that fit inside the
/// image, C1 = (0.01 L)^2, C2 = (0.03 L)^2. Throws DimensionMismatch or TooSmall.
double ssim(const GrayImage& a, const GrayImage& b, double dynamic_range = 255.0);

struct ImageMetricReport {
  double psnr = 0.0;
  double ssim = 0.0;
};

ImageMetricReport image_metrics(const GrayImage& a, const GrayImage& b, double peak = 255.0);

enum class LandmarkSubset { Mouth, Face };

LandmarkSubset parse_landmark_subset(std::string_view text);

/// Mean Euclidean distance over frames and subset points (mouth = 48..67,
/// face = all 68). Throws EmptyInput or LengthMismatch.
double landmark_distance(std::span<const LandmarkFrame> pred, std::span<const LandmarkFrame> gt,
                         LandmarkSubset subset);

}  // namespace auhead
