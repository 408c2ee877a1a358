#include "auhead/kernels.hpp"

namespace auhead::kernels {

namespace {

template <class T>
void guidance(const T* null_null, const T* h_null, const T* null_au, const T* h_au, T s_h, T s_au, T* out,
              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const T base = null_au[i] + s_h * (h_null[i] - null_null[i]);
    out[i] = base + s_au * (h_au[i] - h_null[i]);
  }
}

template <class T>
void cfg(const T* uncond, const T* cond, T s, T* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = uncond[i] + s * (cond[i] - uncond[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

std::uint64_t ssd(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    acc += static_cast<std::uint64_t>(d * d);
  }
  return acc;
}

constexpr KernelTable kScalar{
    Backend::Scalar, &guidance<double>, &guidance<float>, &cfg<double>, &cfg<float>, &dot, &ssd,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace auhead::kernels
