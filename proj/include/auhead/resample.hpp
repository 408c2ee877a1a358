#pragma once

#include <cstddef>

#include "auhead/au_core.hpp"

namespace auhead {

struct ResampleConfig {
  /// Ratio of output to input frame rate; 1/gamma must be an integer stride.
  double gamma = 0.2;
  /// Index of the first kept frame.
  std::size_t phase = 0;

  /// round(1/gamma). Throws InvalidArgument if gamma is outside (0, 1] or
  /// 1/gamma is not within 1e-9 of an integer.
  std::size_t stride() const;
};

/// Keeps frames phase, phase+stride, ... Output fps = fps / stride.
DenseSequence downsample(const DenseSequence& seq, const ResampleConfig& config = {});

/// Piecewise-linear upsampling by an integer factor; (N-1)*factor+1 frames,
/// original frames land exactly on positions k*factor.
DenseSequence upsample_linear(const DenseSequence& seq, std::size_t factor);

/// Linear interpolation onto `target_len` evenly spaced points spanning the
/// first to the last input frame. The output fps keeps that span's duration.
DenseSequence resample_to_length(const DenseSequence& seq, std::size_t target_len);

}  // namespace auhead
