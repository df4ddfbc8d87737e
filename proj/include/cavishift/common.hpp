#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace cavishift {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Permittivity / permeability pair. Complex to admit lossy, plasmonic and
/// dispersive materials.
struct Medium {
  cplx eps{1.0, 0.0};
  cplx mu{1.0, 0.0};

  /// Refractive index sqrt(eps*mu), principal branch.
  cplx index() const { return std::sqrt(eps * mu); }
  /// Wavenumber at frequency omega.
  cplx wavenumber(cplx omega) const { return omega * index(); }
};

inline constexpr Medium vacuum{};

/// Axis-aligned rectangle in the complex plane.
struct ComplexBox {
  double re_min = 0, re_max = 0;
  double im_min = 0, im_max = 0;

  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }
  bool valid() const { return re_max > re_min && im_max > im_min; }
};

struct Point2 {
  double x = 0, y = 0;
  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
};

}  // namespace cavishift
