#pragma once
// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64, an AVX2 variant; the active table is chosen once at runtime from
// CPU support (override with AUHEAD_SIMD=scalar|avx2).
//
// The guidance/CFG variants perform exactly the same IEEE operations per
// element as the scalar code (mul then add, no FMA), so their results are
// bit-identical. dot_f64 reassociates the sum and only agrees to rounding.
// ssd_u8 is exact integer arithmetic on every backend.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace auhead::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b) noexcept;

struct KernelTable {
  Backend backend;

  // out = null_au + s_h * (h_null - null_null) + s_au * (h_au - h_null)
  void (*guidance_f64)(const double* null_null, const double* h_null, const double* null_au, const double* h_au,
                       double s_h, double s_au, double* out, std::size_t n);
  void (*guidance_f32)(const float* null_null, const float* h_null, const float* null_au, const float* h_au,
                       float s_h, float s_au, float* out, std::size_t n);

  // out = uncond + s * (cond - uncond)
  void (*cfg_f64)(const double* uncond, const double* cond, double s, double* out, std::size_t n);
  void (*cfg_f32)(const float* uncond, const float* cond, float s, float* out, std::size_t n);

  double (*dot_f64)(const double* a, const double* b, std::size_t n);

  // Sum of squared differences of two byte buffers.
  std::uint64_t (*ssd_u8)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// Null when the AVX2 variants were not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

bool backend_available(Backend b) noexcept;

/// The table used by the library entry points.
const KernelTable& active() noexcept;

/// Forces a backend (tests, benchmarks). Throws InvalidArgument if unavailable.
void set_backend(Backend b);

}  // namespace auhead::kernels
