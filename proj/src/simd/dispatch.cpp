#include <atomic>
#include <cstdlib>
#include <string>

#include "bf/simd/kernels.hpp"
#include "bf/types.hpp"

namespace bf::simd {

namespace {

constexpr KernelTable kScalarTable{Isa::scalar, &scalar::squared_l2, &scalar::squared_l2_rows};
#if defined(BF_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::avx2, &avx2::squared_l2, &avx2::squared_l2_rows};
#endif
#if defined(BF_HAVE_NEON)
constexpr KernelTable kNeonTable{Isa::neon, &neon::squared_l2, &neon::squared_l2_rows};
#endif

const KernelTable* best_table() noexcept {
#if defined(BF_HAVE_AVX2)
  if (isa_available(Isa::avx2)) return &kAvx2Table;
#endif
#if defined(BF_HAVE_NEON)
  if (isa_available(Isa::neon)) return &kNeonTable;
#endif
  return &kScalarTable;
}

const KernelTable* initial_table() noexcept {
  if (const char* forced = std::getenv("BF_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_available(isa)) return &kernels_for(isa);
    }
  }
  return best_table();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(BF_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(BF_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw Error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available on this build/CPU");
  }
  switch (isa) {
#if defined(BF_HAVE_AVX2)
    case Isa::avx2: return kAvx2Table;
#endif
#if defined(BF_HAVE_NEON)
    case Isa::neon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace bf::simd
