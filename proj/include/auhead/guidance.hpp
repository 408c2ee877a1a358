#pragma once

#include <span>
#include <vector>

namespace auhead {

/// AU guidance scale giving the best quality/expression trade-off.
inline constexpr double kDefaultAuGuidanceScale = 3.5;
inline constexpr double kDefaultAuxGuidanceScale = 1.0;

/// The four denoiser evaluations, named by which conditions were present:
/// H is the auxiliary (audio + reference) condition, AU the AU embedding,
/// "null" the dropped condition.
template <class T>
struct BasicGuidanceInputs {
  std::span<const T> null_null;
  std::span<const T> h_null;
  std::span<const T> null_au;
  std::span<const T> h_au;
  T s_h = static_cast<T>(kDefaultAuxGuidanceScale);
  T s_au = static_cast<T>(kDefaultAuGuidanceScale);
};

using GuidanceInputs = BasicGuidanceInputs<double>;
using GuidanceInputsF32 = BasicGuidanceInputs<float>;

/// eps = e(null, AU) + s_h * (e(H, null) - e(null, null)) + s_au * (e(H, AU) - e(H, null))
///
/// Throws ShapeMismatch for unequal or empty vectors and InvalidArgument for
/// negative or non-finite scales or non-finite entries.
std::vector<double> disentangled_combine(const GuidanceInputs& inputs);
std::vector<float> disentangled_combine(const GuidanceInputsF32& inputs);
void disentangled_combine(const GuidanceInputs& inputs, std::span<double> out);
void disentangled_combine(const GuidanceInputsF32& inputs, std::span<float> out);

/// Classifier-free guidance: uncond + s * (cond - uncond).
std::vector<double> cfg_combine(std::span<const double> uncond, std::span<const double> cond, double s);
std::vector<float> cfg_combine(std::span<const float> uncond, std::span<const float> cond, float s);

}  // namespace auhead
