#include "auhead/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "auhead/kernels.hpp"

namespace auhead {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_same_size(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height) {
    fail(ErrorKind::DimensionMismatch, std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                                           std::to_string(b.width) + "x" + std::to_string(b.height));
  }
  if (a.pixels.size() != static_cast<std::size_t>(a.width) * a.height ||
      b.pixels.size() != static_cast<std::size_t>(b.width) * b.height) {
    fail(ErrorKind::DimensionMismatch, "pixel buffer does not match the image dimensions");
  }
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

std::array<double, kSsimWindow> gaussian_taps() {
  std::array<double, kSsimWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double x = i - kSsimWindow / 2;
    taps[i] = std::exp(-(x * x) / (2.0 * kSsimSigma * kSsimSigma));
    sum += taps[i];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

// Separable valid-mode Gaussian filter of a dense field.
std::vector<double> filter_valid(const std::vector<double>& field, int width, int height,
                                 const std::array<double, kSsimWindow>& taps) {
  const int out_w = width - kSsimWindow + 1;
  const int out_h = height - kSsimWindow + 1;
  std::vector<double> horizontal(static_cast<std::size_t>(out_w) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += taps[k] * field[static_cast<std::size_t>(y) * width + x + k];
      horizontal[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += taps[k] * horizontal[static_cast<std::size_t>(y + k) * out_w + x];
      out[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  return out;
}

}  // namespace

AuMetricReport au_detection_metrics(const DenseSequence& pred, const DenseSequence& gt, const AuMetricOptions& options) {
  if (pred.empty() || gt.empty()) fail(ErrorKind::EmptySequence, "AU metrics need non-empty sequences");
  if (!std::isfinite(options.tau)) fail(ErrorKind::InvalidArgument, "tau must be finite");

  AuMetricReport r;
  r.mae_mode = options.mae_mode;
  r.aligned_frames = std::min(pred.size(), gt.size());
  r.length_mismatch = pred.size() > gt.size() ? pred.size() - gt.size() : gt.size() - pred.size();

  double abs_sum = 0.0;
  std::size_t mae_slots = 0;
  std::size_t exact_frames = 0;
  for (std::size_t t = 0; t < r.aligned_frames; ++t) {
    bool frame_match = true;
    for (std::size_t i = 0; i < kNumAus; ++i) {
      const double p = pred[t][i];
      const double g = gt[t][i];
      const bool p_on = p > options.tau;
      const bool g_on = g > options.tau;
      if (p_on && g_on) ++r.tp;
      else if (p_on) ++r.fp;
      else if (g_on) ++r.fn;
      else ++r.tn;
      if (p_on != g_on) frame_match = false;
      if (options.mae_mode == MaeMode::AllSlots || p_on || g_on) {
        abs_sum += std::abs(p - g);
        ++mae_slots;
      }
    }
    if (frame_match) ++exact_frames;
  }

  r.precision_undefined = (r.tp + r.fp) == 0;
  r.recall_undefined = (r.tp + r.fn) == 0;
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.slot_accuracy = ratio(r.tp + r.tn, r.aligned_frames * kNumAus);
  r.frame_set_accuracy = ratio(exact_frames, r.aligned_frames);
  r.mae = mae_slots == 0 ? 0.0 : abs_sum / static_cast<double>(mae_slots);
  return r;
}

double emotion_accuracy(std::span<const std::string> pred, std::span<const std::string> gt) {
  if (pred.empty() || gt.empty()) fail(ErrorKind::EmptyInput, "emotion accuracy needs at least one label");
  if (pred.size() != gt.size()) {
    fail(ErrorKind::LengthMismatch,
         std::to_string(pred.size()) + " predicted labels vs " + std::to_string(gt.size()) + " ground-truth labels");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (to_lower_ascii(pred[i]) == to_lower_ascii(gt[i])) ++hits;
  }
  return ratio(hits, pred.size());
}

double psnr(const GrayImage& a, const GrayImage& b, double peak) {
  require_same_size(a, b);
  if (a.pixels.empty()) fail(ErrorKind::TooSmall, "PSNR needs at least one pixel");
  if (!(peak > 0.0) || !std::isfinite(peak)) fail(ErrorKind::InvalidArgument, "peak must be positive");
  const std::uint64_t ssd = kernels::active().ssd_u8(a.pixels.data(), b.pixels.data(), a.pixels.size());
  if (ssd == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(ssd) / static_cast<double>(a.pixels.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const GrayImage& a, const GrayImage& b, double dynamic_range) {
  require_same_size(a, b);
  if (a.width < kSsimWindow || a.height < kSsimWindow) {
    fail(ErrorKind::TooSmall, "SSIM needs images of at least 11x11 pixels");
  }
  if (!(dynamic_range > 0.0) || !std::isfinite(dynamic_range)) {
    fail(ErrorKind::InvalidArgument, "dynamic range must be positive");
  }
  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);

  const std::size_t n = a.pixels.size();
  std::vector<double> fa(n), fb(n), faa(n), fbb(n), fab(n);
  for (std::size_t i = 0; i < n; ++i) {
    fa[i] = a.pixels[i];
    fb[i] = b.pixels[i];
    faa[i] = fa[i] * fa[i];
    fbb[i] = fb[i] * fb[i];
    fab[i] = fa[i] * fb[i];
  }
  const auto taps = gaussian_taps();
  const auto mu_a = filter_valid(fa, a.width, a.height, taps);
  const auto mu_b = filter_valid(fb, a.width, a.height, taps);
  const auto e_aa = filter_valid(faa, a.width, a.height, taps);
  const auto e_bb = filter_valid(fbb, a.width, a.height, taps);
  const auto e_ab = filter_valid(fab, a.width, a.height, taps);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

ImageMetricReport image_metrics(const GrayImage& a, const GrayImage& b, double peak) {
  return {psnr(a, b, peak), ssim(a, b, peak)};
}

LandmarkSubset parse_landmark_subset(std::string_view text) {
  if (text == "mouth") return LandmarkSubset::Mouth;
  if (text == "face") return LandmarkSubset::Face;
  fail(ErrorKind::InvalidArgument, "landmark subset must be 'mouth' or 'face'");
}

double landmark_distance(std::span<const LandmarkFrame> pred, std::span<const LandmarkFrame> gt,
                         LandmarkSubset subset) {
  if (pred.empty() || gt.empty()) fail(ErrorKind::EmptyInput, "landmark distance needs at least one frame");
  if (pred.size() != gt.size()) {
    fail(ErrorKind::LengthMismatch,
         std::to_string(pred.size()) + " predicted frames vs " + std::to_string(gt.size()) + " ground-truth frames");
  }
  const std::size_t first = subset == LandmarkSubset::Mouth ? 48 : 0;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 0; f < pred.size(); ++f) {
    for (std::size_t p = first; p < kNumLandmarks; ++p) {
      total += std::hypot(pred[f].points[p].x - gt[f].points[p].x, pred[f].points[p].y - gt[f].points[p].y);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace auhead
