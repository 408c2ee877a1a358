#include "auhead/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "auhead/kernels.hpp"

namespace auhead {

namespace {

void fill_window(const DenseSequence& seq, std::size_t t, const EmbeddingConfig& config, std::span<double> out) {
  const auto n = static_cast<long long>(config.n);
  const auto last = static_cast<long long>(seq.size()) - 1;
  for (long long w = 0; w < 2 * n + 1; ++w) {
    long long src = static_cast<long long>(t) - n + w;
    double* row = out.data() + w * static_cast<long long>(kNumAus);
    if (src < 0 || src > last) {
      if (config.padding == Padding::Zero) {
        std::fill(row, row + kNumAus, 0.0);
        continue;
      }
      src = std::clamp(src, 0LL, last);
    }
    const auto& values = seq[static_cast<std::size_t>(src)].values();
    std::copy(values.begin(), values.end(), row);
  }
}

}  // namespace

Padding parse_padding(std::string_view text) {
  if (text == "replicate") return Padding::Replicate;
  if (text == "zero") return Padding::Zero;
  fail(ErrorKind::InvalidArgument, "padding must be 'replicate' or 'zero'");
}

ConvKernel::ConvKernel(std::size_t dim, std::size_t window, std::vector<double> weights, std::vector<double> bias)
    : dim_(dim), window_(window), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (dim_ == 0 || window_ == 0 || window_ % 2 == 0) {
    fail(ErrorKind::ShapeMismatch, "kernel needs dim >= 1 and an odd window length");
  }
  if (weights_.size() != dim_ * window_ * kNumAus || bias_.size() != dim_) {
    fail(ErrorKind::ShapeMismatch, "kernel buffers do not match dim " + std::to_string(dim_) + " and window " +
                                       std::to_string(window_));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(weights_.begin(), weights_.end(), finite) || !std::all_of(bias_.begin(), bias_.end(), finite)) {
    fail(ErrorKind::InvalidArgument, "kernel contains non-finite entries");
  }
}

ConvKernel ConvKernel::zeros(const EmbeddingConfig& config) {
  return ConvKernel(config.dim, config.window(), std::vector<double>(config.dim * config.window() * kNumAus, 0.0),
                    std::vector<double>(config.dim, 0.0));
}

ConvKernel ConvKernel::random(const EmbeddingConfig& config, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> weights(config.dim * config.window() * kNumAus);
  for (auto& w : weights) w = dist(rng);
  return ConvKernel(config.dim, config.window(), std::move(weights), std::vector<double>(config.dim, 0.0));
}

void ConvKernel::set_weight(std::size_t d, std::size_t w, std::size_t i, double v) {
  if (d >= dim_ || w >= window_ || i >= kNumAus) fail(ErrorKind::IndexOutOfRange, "kernel weight index");
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "kernel weight must be finite");
  weights_[(d * window_ + w) * kNumAus + i] = v;
}

void ConvKernel::set_bias(std::size_t d, double v) {
  if (d >= dim_) fail(ErrorKind::IndexOutOfRange, "kernel bias index");
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "kernel bias must be finite");
  bias_[d] = v;
}

Matrix context_window(const DenseSequence& seq, std::size_t t, const EmbeddingConfig& config) {
  if (t >= seq.size()) {
    Error err(ErrorKind::IndexOutOfRange,
              "frame " + std::to_string(t) + " is outside a sequence of " + std::to_string(seq.size()));
    err.index = static_cast<long long>(t);
    throw err;
  }
  Matrix m(config.window(), kNumAus);
  fill_window(seq, t, config, m.data());
  return m;
}

std::vector<EmbeddingVector> embed_sequence(const DenseSequence& seq, const ConvKernel& kernel,
                                            const EmbeddingConfig& config) {
  if (kernel.dim() != config.dim || kernel.window() != config.window()) {
    fail(ErrorKind::ShapeMismatch, "kernel shape (dim " + std::to_string(kernel.dim()) + ", window " +
                                       std::to_string(kernel.window()) + ") does not match config (dim " +
                                       std::to_string(config.dim) + ", window " + std::to_string(config.window()) +
                                       ")");
  }
  const auto& k = kernels::active();
  std::vector<double> window(kernel.row_length());
  std::vector<EmbeddingVector> out;
  out.reserve(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    fill_window(seq, t, config, window);
    EmbeddingVector c;
    c.values.resize(kernel.dim());
    for (std::size_t d = 0; d < kernel.dim(); ++d) {
      c.values[d] = kernel.bias()[d] + k.dot_f64(kernel.weight_row(d).data(), window.data(), window.size());
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace auhead
