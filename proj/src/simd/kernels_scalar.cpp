#include "bf/simd/kernels.hpp"

namespace bf::simd::scalar {

double squared_l2(const double* a, const double* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

void squared_l2_rows(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                     double* out) noexcept {
  for (std::size_t r = 0; r < n_rows; ++r) {
    out[r] = squared_l2(query, rows + r * dim, dim);
  }
}

}  // namespace bf::simd::scalar
