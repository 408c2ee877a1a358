#pragma once
// Independent reference implementations used only by the tests. They are
// written from the metric/format definitions, deliberately without sharing
// code paths with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "auhead/au_core.hpp"

namespace oracle {

struct SlotReport {
  double precision = 0, recall = 0, f1 = 0, slot_accuracy = 0, frame_set_accuracy = 0, mae = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0, aligned = 0, mismatch = 0;
};

// Builds the set of active (frame, slot) cells of each sequence and compares
// them as sets.
inline SlotReport slot_enumeration(const auhead::DenseSequence& pred, const auhead::DenseSequence& gt, double tau,
                                   bool active_only_mae) {
  SlotReport r;
  r.aligned = pred.size() < gt.size() ? pred.size() : gt.size();
  r.mismatch = pred.size() > gt.size() ? pred.size() - gt.size() : gt.size() - pred.size();
  std::set<std::pair<std::size_t, std::size_t>> p_on, g_on, all;
  for (std::size_t t = 0; t < r.aligned; ++t) {
    for (std::size_t i = 0; i < 24; ++i) {
      all.insert({t, i});
      if (pred[t][i] > tau) p_on.insert({t, i});
      if (gt[t][i] > tau) g_on.insert({t, i});
    }
  }
  for (const auto& cell : all) {
    const bool p = p_on.count(cell) != 0;
    const bool g = g_on.count(cell) != 0;
    r.tp += p && g;
    r.fp += p && !g;
    r.fn += !p && g;
    r.tn += !p && !g;
  }
  r.precision = p_on.empty() ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(p_on.size());
  r.recall = g_on.empty() ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(g_on.size());
  r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.slot_accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(all.size());

  std::size_t same_frames = 0;
  for (std::size_t t = 0; t < r.aligned; ++t) {
    std::set<std::size_t> a, b;
    for (const auto& [ft, i] : p_on)
      if (ft == t) a.insert(i);
    for (const auto& [ft, i] : g_on)
      if (ft == t) b.insert(i);
    same_frames += a == b;
  }
  r.frame_set_accuracy = static_cast<double>(same_frames) / static_cast<double>(r.aligned);

  // Cells are visited in (frame, slot) order, so the sum is accumulated in
  // the natural reading order.
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& cell : all) {
    if (active_only_mae && !p_on.count(cell) && !g_on.count(cell)) continue;
    sum += std::abs(pred[cell.first][cell.second] - gt[cell.first][cell.second]);
    ++count;
  }
  r.mae = count == 0 ? 0.0 : sum / static_cast<double>(count);
  return r;
}

// Number of frames whose closing bracket appears in `text`: tracks bracket
// depth from the first '[' after the emotion header and counts every return
// from depth 2 to depth 1.
inline std::size_t closed_frames(std::string_view text) {
  const auto start = text.find(", [");
  if (start == std::string_view::npos) return 0;
  int depth = 0;
  std::size_t frames = 0;
  for (std::size_t i = start + 2; i < text.size(); ++i) {
    if (text[i] == '[') ++depth;
    if (text[i] == ']') {
      --depth;
      if (depth == 1) ++frames;
      if (depth == 0) break;
    }
  }
  return frames;
}

// Character counts of the two text renderings, derived from their grammar:
// each value is three characters (".dd" or "1.0"), list items are separated by
// ", " and wrapped in brackets.
inline std::size_t list_chars(const std::vector<std::size_t>& item_lengths) {
  std::size_t n = 2;
  for (std::size_t len : item_lengths) n += len;
  if (!item_lengths.empty()) n += 2 * (item_lengths.size() - 1);
  return n;
}

inline std::size_t dense_chars(std::size_t frames) {
  const std::size_t frame = list_chars(std::vector<std::size_t>(24, 3));
  return list_chars(std::vector<std::size_t>(frames, frame));
}

inline std::size_t sparse_chars(const std::vector<std::vector<int>>& active_indices) {
  std::vector<std::size_t> frame_lengths;
  for (const auto& frame : active_indices) {
    std::vector<std::size_t> pairs;
    for (int i : frame) pairs.push_back(2 + (i < 10 ? 1 : 2) + 2 + 3);
    frame_lengths.push_back(list_chars(pairs));
  }
  return list_chars(frame_lengths);
}

// Plain per-element loop of the guidance formula, in long double.
inline std::vector<double> guidance_loop(const std::vector<double>& nn, const std::vector<double>& hn,
                                         const std::vector<double>& na, const std::vector<double>& ha, double s_h,
                                         double s_au) {
  std::vector<double> out(nn.size());
  for (std::size_t k = 0; k < nn.size(); ++k) {
    const long double v = static_cast<long double>(na[k]) +
                          static_cast<long double>(s_h) * (static_cast<long double>(hn[k]) - nn[k]) +
                          static_cast<long double>(s_au) * (static_cast<long double>(ha[k]) - hn[k]);
    out[k] = static_cast<double>(v);
  }
  return out;
}

// Pixels lit by a segment, stepping along the major axis one pixel at a time
// and rounding the minor coordinate (exact for axis-aligned and diagonal runs).
inline std::set<std::pair<int, int>> segment_pixels(int x0, int y0, int x1, int y1) {
  std::set<std::pair<int, int>> px;
  const int steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0));
  for (int s = 0; s <= steps; ++s) {
    const double f = steps == 0 ? 0.0 : static_cast<double>(s) / steps;
    px.insert({static_cast<int>(std::lround(x0 + f * (x1 - x0))), static_cast<int>(std::lround(y0 + f * (y1 - y0)))});
  }
  return px;
}

// Random dense frame with values on the two-decimal grid; each slot is active
// with probability p_active.
inline auhead::AuVector random_quantized_frame(std::mt19937_64& rng, double p_active = 0.4) {
  std::bernoulli_distribution on(p_active);
  std::uniform_int_distribution<int> level(1, 100);
  auhead::AuVector::Storage v{};
  for (auto& x : v) x = on(rng) ? level(rng) / 100.0 : 0.0;
  return auhead::AuVector(v);
}

inline auhead::DenseSequence random_quantized_sequence(std::mt19937_64& rng, std::size_t frames, double fps = 5.0,
                                                       double p_active = 0.4) {
  std::vector<auhead::AuVector> out;
  out.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) out.push_back(random_quantized_frame(rng, p_active));
  return auhead::DenseSequence(fps, std::move(out));
}

}  // namespace oracle
