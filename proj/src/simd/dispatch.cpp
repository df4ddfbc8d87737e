#include <atomic>

#include "cavishift/simd.hpp"

namespace cavishift::simd {
namespace {

bool cpu_has_avx2() {
#if defined(CAVISHIFT_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{detected_level()};
  return level;
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
  }
  return "unknown";
}

Level detected_level() {
  static const Level level = cpu_has_avx2() ? Level::Avx2 : Level::Scalar;
  return level;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

Level force_level(Level level) {
  if (level == Level::Avx2 && detected_level() != Level::Avx2) level = Level::Scalar;
  current().store(level, std::memory_order_relaxed);
  return level;
}

void reset_level() { current().store(detected_level(), std::memory_order_relaxed); }

void np_kernel_row(double px, double py, double nx, double ny, const double* x, const double* y,
                   double* out, std::size_t n) {
#ifdef CAVISHIFT_BUILD_AVX2
  if (active_level() == Level::Avx2) {
    detail::np_kernel_row_avx2(px, py, nx, ny, x, y, out, n);
    return;
  }
#endif
  detail::np_kernel_row_scalar(px, py, nx, ny, x, y, out, n);
}

void complex_axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
#ifdef CAVISHIFT_BUILD_AVX2
  if (active_level() == Level::Avx2) {
    detail::complex_axpy_avx2(a, x, y, n);
    return;
  }
#endif
  detail::complex_axpy_scalar(a, x, y, n);
}

}  // namespace cavishift::simd
