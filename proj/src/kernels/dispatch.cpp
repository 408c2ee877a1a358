#include <atomic>
#include <cstdlib>
#include <string>

#include "auhead/error.hpp"
#include "auhead/kernels.hpp"

namespace auhead::kernels {

#if defined(AUHEAD_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(AUHEAD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const char* forced = std::getenv("AUHEAD_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

const KernelTable* avx2_table() noexcept {
#if defined(AUHEAD_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2::kTable;
#endif
  return nullptr;
}

bool backend_available(Backend b) noexcept { return b == Backend::Scalar || avx2_table() != nullptr; }

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    fail(ErrorKind::InvalidArgument, "kernel backend " + std::string(to_string(b)) + " is not available");
  }
  current().store(b == Backend::Scalar ? &scalar_table() : avx2_table(), std::memory_order_release);
}

}  // namespace auhead::kernels
