#include "auhead/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace auhead {

namespace {

AuVector lerp(const AuVector& a, const AuVector& b, double t) {
  AuVector::Storage out{};
  for (std::size_t i = 0; i < kNumAus; ++i) {
    out[i] = std::clamp(a[i] + t * (b[i] - a[i]), 0.0, 1.0);
  }
  return AuVector(out);
}

}  // namespace

std::size_t ResampleConfig::stride() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(ErrorKind::InvalidArgument, "gamma must lie in (0, 1]");
  const double inverse = 1.0 / gamma;
  const double rounded = std::round(inverse);
  if (std::abs(inverse - rounded) > 1e-9) {
    fail(ErrorKind::InvalidArgument, "1/gamma must be an integer stride (gamma = " + std::to_string(gamma) + ")");
  }
  return static_cast<std::size_t>(rounded);
}

DenseSequence downsample(const DenseSequence& seq, const ResampleConfig& config) {
  const std::size_t stride = config.stride();
  if (seq.empty()) fail(ErrorKind::EmptySequence, "cannot downsample an empty sequence");
  if (config.phase >= seq.size()) {
    Error err(ErrorKind::BadPhase, "phase " + std::to_string(config.phase) + " is not below the frame count " +
                                       std::to_string(seq.size()));
    err.index = static_cast<long long>(config.phase);
    throw err;
  }
  std::vector<AuVector> frames;
  frames.reserve((seq.size() - config.phase + stride - 1) / stride);
  for (std::size_t i = config.phase; i < seq.size(); i += stride) frames.push_back(seq[i]);
  return DenseSequence(seq.fps() / static_cast<double>(stride), std::move(frames));
}

DenseSequence upsample_linear(const DenseSequence& seq, std::size_t factor) {
  if (seq.empty()) fail(ErrorKind::EmptySequence, "cannot upsample an empty sequence");
  if (factor < 1) fail(ErrorKind::InvalidArgument, "upsampling factor must be at least 1");

  const std::size_t n = seq.size();
  std::vector<AuVector> frames;
  frames.reserve((n - 1) * factor + 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    frames.push_back(seq[k]);
    for (std::size_t j = 1; j < factor; ++j) {
      frames.push_back(lerp(seq[k], seq[k + 1], static_cast<double>(j) / static_cast<double>(factor)));
    }
  }
  frames.push_back(seq[n - 1]);
  return DenseSequence(seq.fps() * static_cast<double>(factor), std::move(frames));
}

DenseSequence resample_to_length(const DenseSequence& seq, std::size_t target_len) {
  if (seq.empty()) fail(ErrorKind::EmptySequence, "cannot resample an empty sequence");
  if (target_len < 1) fail(ErrorKind::InvalidArgument, "target length must be at least 1");

  const std::size_t n = seq.size();
  std::vector<AuVector> frames;
  frames.reserve(target_len);
  for (std::size_t k = 0; k < target_len; ++k) {
    if (n == 1 || target_len == 1) {
      frames.push_back(seq[0]);
      continue;
    }
    const double x = static_cast<double>(k * (n - 1)) / static_cast<double>(target_len - 1);
    const auto left = std::min(static_cast<std::size_t>(std::floor(x)), n - 1);
    const double t = x - static_cast<double>(left);
    if (left + 1 >= n || t == 0.0) {
      frames.push_back(seq[left]);
    } else {
      frames.push_back(lerp(seq[left], seq[left + 1], t));
    }
  }
  // Keep the span between the first and last frame fixed in time.
  const double fps = (n > 1 && target_len > 1)
                         ? seq.fps() * static_cast<double>(target_len - 1) / static_cast<double>(n - 1)
                         : seq.fps();
  return DenseSequence(fps, std::move(frames));
}

}  // namespace auhead
