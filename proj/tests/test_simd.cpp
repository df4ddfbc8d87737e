#include <doctest.h>

#include <random>
#include <vector>

#include "cavishift/simd.hpp"

using namespace cavishift;

TEST_SUITE("simd") {
  TEST_CASE("dispatch reports a consistent level") {
    const auto detected = simd::detected_level();
    CHECK(simd::force_level(simd::Level::Scalar) == simd::Level::Scalar);
    CHECK(simd::active_level() == simd::Level::Scalar);
    CHECK(simd::force_level(simd::Level::Avx2) == detected);
    simd::reset_level();
    CHECK(simd::active_level() == detected);
    CHECK(simd::to_string(simd::Level::Scalar) == "scalar");
  }

  TEST_CASE("NP kernel row: variants agree, coincident point is zero") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 256u, 1023u}) {
      std::vector<double> x(n), y(n), a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
      }
      const std::size_t self = n / 2;
      const double px = x[self], py = y[self];
      simd::detail::np_kernel_row_scalar(px, py, 0.6, 0.8, x.data(), y.data(), a.data(), n);
      CHECK(a[self] == 0.0);
      // Direct formula for a few entries.
      for (std::size_t j = 0; j < n; j += 7) {
        if (j == self) continue;
        const double dx = px - x[j], dy = py - y[j];
        CHECK(a[j] == doctest::Approx((dx * 0.6 + dy * 0.8) / (2 * pi * (dx * dx + dy * dy))).epsilon(1e-14));
      }
      if (simd::detected_level() == simd::Level::Avx2) {
        simd::detail::np_kernel_row_avx2(px, py, 0.6, 0.8, x.data(), y.data(), b.data(), n);
        for (std::size_t j = 0; j < n; ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("complex AXPY: variants agree with the definition") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n : {0u, 1u, 2u, 3u, 8u, 129u}) {
      std::vector<cplx> x(n), y0(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = {g(rng), g(rng)};
        y0[i] = {g(rng), g(rng)};
      }
      const cplx a{0.3, -1.7};
      auto ys = y0;
      simd::detail::complex_axpy_scalar(a, x.data(), ys.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - (y0[i] + a * x[i])) < 1e-15);
      auto yd = y0;
      simd::complex_axpy(a, x.data(), yd.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(yd[i] - ys[i]) < 1e-14);
      if (simd::detected_level() == simd::Level::Avx2) {
        auto yv = y0;
        simd::detail::complex_axpy_avx2(a, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(yv[i] - ys[i]) < 1e-14);
      }
    }
  }
}
