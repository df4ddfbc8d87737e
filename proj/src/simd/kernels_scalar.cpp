#include "cavishift/simd.hpp"

namespace cavishift::simd::detail {

void np_kernel_row_scalar(double px, double py, double nx, double ny, const double* x,
                          const double* y, double* out, std::size_t n) {
  const double inv2pi = 1.0 / (2.0 * pi);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = px - x[j];
    const double dy = py - y[j];
    const double r2 = dx * dx + dy * dy;
    out[j] = r2 > 0.0 ? (dx * nx + dy * ny) * inv2pi / r2 : 0.0;
  }
}

void complex_axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace cavishift::simd::detail
