#pragma once

// Euclidean distance kernels. Every ISA variant implements the same two entry
// points; the dispatcher picks one at startup from CPU feature bits. The scalar
// variant is the reference the vector variants are tested against.

#include <cstddef>
#include <string_view>

namespace bf::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Sum of squared coordinate differences of two length-n vectors.
using SquaredL2Fn = double (*)(const double* a, const double* b, std::size_t n) noexcept;

/// out[r] = squared_l2(query, rows + r * dim, dim) for r in [0, n_rows).
using SquaredL2RowsFn = void (*)(const double* query, const double* rows, std::size_t n_rows,
                                 std::size_t dim, double* out) noexcept;

struct KernelTable {
  Isa isa;
  SquaredL2Fn squared_l2;
  SquaredL2RowsFn squared_l2_rows;
};

namespace scalar {
double squared_l2(const double* a, const double* b, std::size_t n) noexcept;
void squared_l2_rows(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                     double* out) noexcept;
}  // namespace scalar

namespace avx2 {
double squared_l2(const double* a, const double* b, std::size_t n) noexcept;
void squared_l2_rows(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                     double* out) noexcept;
}  // namespace avx2

namespace neon {
double squared_l2(const double* a, const double* b, std::size_t n) noexcept;
void squared_l2_rows(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                     double* out) noexcept;
}  // namespace neon

/// True if the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// The table for a specific variant. Throws bf::Error if it is not available.
const KernelTable& kernels_for(Isa isa);

/// The active table. Chosen on first use: the best available variant, unless the
/// BF_SIMD environment variable names another one ("scalar", "avx2", "neon").
const KernelTable& active_kernels() noexcept;

/// Switch the active variant. Not thread-safe against concurrent kernel calls.
void set_active_isa(Isa isa);

inline double squared_l2(const double* a, const double* b, std::size_t n) noexcept {
  return active_kernels().squared_l2(a, b, n);
}

inline void squared_l2_rows(const double* query, const double* rows, std::size_t n_rows,
                            std::size_t dim, double* out) noexcept {
  active_kernels().squared_l2_rows(query, rows, n_rows, dim, out);
}

}  // namespace bf::simd
