#include <immintrin.h>

#include "cavishift/simd.hpp"

namespace cavishift::simd::detail {

void np_kernel_row_avx2(double px, double py, double nx, double ny, const double* x,
                        const double* y, double* out, std::size_t n) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d vnx = _mm256_set1_pd(nx);
  const __m256d vny = _mm256_set1_pd(ny);
  const __m256d scale = _mm256_set1_pd(1.0 / (2.0 * pi));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(x + j));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(y + j));
    const __m256d r2 = _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
    const __m256d num = _mm256_fmadd_pd(dy, vny, _mm256_mul_pd(dx, vnx));
    const __m256d val = _mm256_div_pd(_mm256_mul_pd(num, scale), r2);
    const __m256d nonzero = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + j, _mm256_and_pd(val, nonzero));
  }
  if (j < n) np_kernel_row_scalar(px, py, nx, ny, x + j, y + j, out + j, n - j);
}

// Two complex numbers per register, interleaved (re, im, re, im).
void complex_axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0b0101);
    // (ar xr - ai xi, ar xi + ai xr)
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xswap));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), prod));
  }
  if (i < n) complex_axpy_scalar(a, x + i, y + i, n - i);
}

}  // namespace cavishift::simd::detail
