#include "auhead/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auhead/error.hpp"
#include "auhead/kernels.hpp"

namespace auhead {

namespace {

template <class T>
void check_vectors(std::initializer_list<std::span<const T>> vectors, std::size_t out_size) {
  const std::size_t n = vectors.begin()->size();
  if (n == 0) fail(ErrorKind::ShapeMismatch, "guidance vectors must not be empty");
  for (const auto& v : vectors) {
    if (v.size() != n) {
      fail(ErrorKind::ShapeMismatch,
           "guidance vectors differ in length (" + std::to_string(n) + " vs " + std::to_string(v.size()) + ")");
    }
    if (!std::all_of(v.begin(), v.end(), [](T x) { return std::isfinite(x); })) {
      fail(ErrorKind::InvalidArgument, "guidance vectors contain non-finite entries");
    }
  }
  if (out_size != n) fail(ErrorKind::ShapeMismatch, "output buffer length does not match the inputs");
}

template <class T>
void check_scale(T s, const char* name) {
  if (!std::isfinite(s) || s < 0) fail(ErrorKind::InvalidArgument, std::string(name) + " must be finite and >= 0");
}

template <class T>
void combine(const BasicGuidanceInputs<T>& in, std::span<T> out) {
  check_vectors<T>({in.null_null, in.h_null, in.null_au, in.h_au}, out.size());
  check_scale(in.s_h, "s_h");
  check_scale(in.s_au, "s_au");
  const auto& k = kernels::active();
  if constexpr (std::is_same_v<T, double>) {
    k.guidance_f64(in.null_null.data(), in.h_null.data(), in.null_au.data(), in.h_au.data(), in.s_h, in.s_au,
                   out.data(), out.size());
  } else {
    k.guidance_f32(in.null_null.data(), in.h_null.data(), in.null_au.data(), in.h_au.data(), in.s_h, in.s_au,
                   out.data(), out.size());
  }
}

template <class T>
std::vector<T> cfg(std::span<const T> uncond, std::span<const T> cond, T s) {
  check_vectors<T>({uncond, cond}, uncond.size());
  if (!std::isfinite(s)) fail(ErrorKind::InvalidArgument, "guidance scale must be finite");
  std::vector<T> out(uncond.size());
  const auto& k = kernels::active();
  if constexpr (std::is_same_v<T, double>) {
    k.cfg_f64(uncond.data(), cond.data(), s, out.data(), out.size());
  } else {
    k.cfg_f32(uncond.data(), cond.data(), s, out.data(), out.size());
  }
  return out;
}

}  // namespace

void disentangled_combine(const GuidanceInputs& inputs, std::span<double> out) { combine(inputs, out); }
void disentangled_combine(const GuidanceInputsF32& inputs, std::span<float> out) { combine(inputs, out); }

std::vector<double> disentangled_combine(const GuidanceInputs& inputs) {
  std::vector<double> out(inputs.null_null.size());
  combine(inputs, std::span<double>(out));
  return out;
}

std::vector<float> disentangled_combine(const GuidanceInputsF32& inputs) {
  std::vector<float> out(inputs.null_null.size());
  combine(inputs, std::span<float>(out));
  return out;
}

std::vector<double> cfg_combine(std::span<const double> uncond, std::span<const double> cond, double s) {
  return cfg(uncond, cond, s);
}

std::vector<float> cfg_combine(std::span<const float> uncond, std::span<const float> cond, float s) {
  return cfg(uncond, cond, s);
}

}  // namespace auhead
