#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "auhead/au_core.hpp"

namespace auhead {

enum class Padding { Replicate, Zero };

Padding parse_padding(std::string_view text);

struct EmbeddingConfig {
  /// Half-window: frames t-n .. t+n feed the embedding of frame t.
  std::size_t n = 2;
  std::size_t dim = 128;
  Padding padding = Padding::Replicate;

  std::size_t window() const noexcept { return 2 * n + 1; }
};

/// Row-major real matrix.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Temporal convolution weights: weights[d][w][i] over (dim, window, 24)
/// plus one bias per output dimension.
class ConvKernel {
 public:
  /// Throws ShapeMismatch when the buffers disagree with (dim, window) and
  /// InvalidArgument for non-finite entries.
  ConvKernel(std::size_t dim, std::size_t window, std::vector<double> weights, std::vector<double> bias);

  /// All-zero weights and bias.
  static ConvKernel zeros(const EmbeddingConfig& config);
  /// Uniform weights in [-scale, scale] and zero bias from a fixed seed.
  static ConvKernel random(const EmbeddingConfig& config, std::uint64_t seed, double scale = 0.1);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t window() const noexcept { return window_; }
  std::size_t row_length() const noexcept { return window_ * kNumAus; }

  double weight(std::size_t d, std::size_t w, std::size_t i) const noexcept {
    return weights_[(d * window_ + w) * kNumAus + i];
  }
  void set_weight(std::size_t d, std::size_t w, std::size_t i, double v);
  void set_bias(std::size_t d, double v);

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> bias() const noexcept { return bias_; }
  std::span<const double> weight_row(std::size_t d) const noexcept {
    return {weights_.data() + d * row_length(), row_length()};
  }

  friend bool operator==(const ConvKernel&, const ConvKernel&) = default;

 private:
  std::size_t dim_;
  std::size_t window_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

struct EmbeddingVector {
  std::vector<double> values;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Frames t-n .. t+n as rows; rows before the start or past the end are the
/// edge frame (replicate) or zeros. Throws IndexOutOfRange for t outside the
/// sequence.
Matrix context_window(const DenseSequence& seq, std::size_t t, const EmbeddingConfig& config);

/// c_t[d] = bias[d] + sum over (w, i) of weights[d][w][i] * window(t)[w][i],
/// one vector per input frame. Throws ShapeMismatch if the kernel does not
/// match the config.
std::vector<EmbeddingVector> embed_sequence(const DenseSequence& seq, const ConvKernel& kernel,
                                            const EmbeddingConfig& config);

}  // namespace auhead
