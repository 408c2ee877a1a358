// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include "auhead/kernels.hpp"

namespace auhead::kernels::avx2 {

namespace {

void guidance_f64(const double* null_null, const double* h_null, const double* null_au, const double* h_au,
                  double s_h, double s_au, double* out, std::size_t n) {
  const __m256d vs_h = _mm256_set1_pd(s_h);
  const __m256d vs_au = _mm256_set1_pd(s_au);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d nn = _mm256_loadu_pd(null_null + i);
    const __m256d hn = _mm256_loadu_pd(h_null + i);
    const __m256d na = _mm256_loadu_pd(null_au + i);
    const __m256d ha = _mm256_loadu_pd(h_au + i);
    const __m256d base = _mm256_add_pd(na, _mm256_mul_pd(vs_h, _mm256_sub_pd(hn, nn)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(base, _mm256_mul_pd(vs_au, _mm256_sub_pd(ha, hn))));
  }
  for (; i < n; ++i) {
    const double base = null_au[i] + s_h * (h_null[i] - null_null[i]);
    out[i] = base + s_au * (h_au[i] - h_null[i]);
  }
}

void guidance_f32(const float* null_null, const float* h_null, const float* null_au, const float* h_au, float s_h,
                  float s_au, float* out, std::size_t n) {
  const __m256 vs_h = _mm256_set1_ps(s_h);
  const __m256 vs_au = _mm256_set1_ps(s_au);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 nn = _mm256_loadu_ps(null_null + i);
    const __m256 hn = _mm256_loadu_ps(h_null + i);
    const __m256 na = _mm256_loadu_ps(null_au + i);
    const __m256 ha = _mm256_loadu_ps(h_au + i);
    const __m256 base = _mm256_add_ps(na, _mm256_mul_ps(vs_h, _mm256_sub_ps(hn, nn)));
    _mm256_storeu_ps(out + i, _mm256_add_ps(base, _mm256_mul_ps(vs_au, _mm256_sub_ps(ha, hn))));
  }
  for (; i < n; ++i) {
    const float base = null_au[i] + s_h * (h_null[i] - null_null[i]);
    out[i] = base + s_au * (h_au[i] - h_null[i]);
  }
}

void cfg_f64(const double* uncond, const double* cond, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_loadu_pd(uncond + i);
    const __m256d c = _mm256_loadu_pd(cond + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(u, _mm256_mul_pd(vs, _mm256_sub_pd(c, u))));
  }
  for (; i < n; ++i) out[i] = uncond[i] + s * (cond[i] - uncond[i]);
}

void cfg_f32(const float* uncond, const float* cond, float s, float* out, std::size_t n) {
  const __m256 vs = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 u = _mm256_loadu_ps(uncond + i);
    const __m256 c = _mm256_loadu_ps(cond + i);
    _mm256_storeu_ps(out + i, _mm256_add_ps(u, _mm256_mul_ps(vs, _mm256_sub_ps(c, u))));
  }
  for (; i < n; ++i) out[i] = uncond[i] + s * (cond[i] - uncond[i]);
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

std::uint64_t ssd_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  // Each 16-byte step adds at most 2 * 255^2 to every int32 lane; flushing
  // every 4096 steps keeps lanes below 2^31.
  constexpr std::size_t kFlushSteps = 4096;
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i + 16 <= n) {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t step = 0; step < kFlushSteps && i + 16 <= n; ++step, i += 16) {
      const __m256i va = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)));
      const __m256i vb = _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
      const __m256i d = _mm256_sub_epi16(va, vb);
      acc = _mm256_add_epi32(acc, _mm256_madd_epi16(d, d));
    }
    alignas(32) std::int32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (std::int32_t lane : lanes) total += static_cast<std::uint64_t>(lane);
  }
  for (; i < n; ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    total += static_cast<std::uint64_t>(d * d);
  }
  return total;
}

}  // namespace

extern const KernelTable kTable;
const KernelTable kTable{
    Backend::Avx2, &guidance_f64, &guidance_f32, &cfg_f64, &cfg_f32, &dot_f64, &ssd_u8,
};

}  // namespace auhead::kernels::avx2
