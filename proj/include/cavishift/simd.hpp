#pragma once

#include <cstddef>
#include <string_view>

#include "cavishift/common.hpp"

/// Data-parallel kernels with a scalar reference and an AVX2 variant chosen
/// at runtime from the CPU feature bits.
namespace cavishift::simd {

enum class Level { Scalar, Avx2 };

std::string_view to_string(Level level);

/// Best level supported by both the build and the running CPU.
Level detected_level();

/// Level the dispatched entry points currently use.
Level active_level();

/// Force a level (tests use this to compare variants). Requesting a level
/// the CPU cannot run falls back to Scalar; the return value is what took
/// effect.
Level force_level(Level level);
void reset_level();

/// One row of the double-layer (adjoint Neumann-Poincare) kernel:
///   out[j] = ((px - x[j]) nx + (py - y[j]) ny) / (2 pi |p - (x[j], y[j])|^2)
/// The entry where the points coincide is left as 0; the caller supplies the
/// diagonal limit.
void np_kernel_row(double px, double py, double nx, double ny, const double* x, const double* y,
                   double* out, std::size_t n);

/// y[i] += a * x[i]
void complex_axpy(cplx a, const cplx* x, cplx* y, std::size_t n);

namespace detail {
void np_kernel_row_scalar(double px, double py, double nx, double ny, const double* x,
                          const double* y, double* out, std::size_t n);
void complex_axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n);
void np_kernel_row_avx2(double px, double py, double nx, double ny, const double* x,
                        const double* y, double* out, std::size_t n);
void complex_axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n);
}  // namespace detail

}  // namespace cavishift::simd
