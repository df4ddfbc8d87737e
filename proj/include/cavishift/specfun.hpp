#pragma once

#include <vector>

#include "cavishift/common.hpp"

/// Cylinder (integer order) and spherical (half-integer order) Bessel and
/// Hankel functions of complex argument.
///
/// Validated envelope: order <= 60, |z| <= 100, |Im z| <= 20. Requests
/// outside it throw LossOfAccuracy.
///
/// Branch cut for Y and H1: the negative real axis (principal log). Points
/// exactly on the cut throw DomainError.
namespace cavishift::specfun {

enum class BesselKind { J, Y, H1 };

/// A function value and its derivative with respect to the argument.
struct CylValue {
  cplx value;
  cplx derivative;
};

inline constexpr int kMaxOrder = 60;
inline constexpr double kMaxAbsArg = 100.0;
inline constexpr double kMaxAbsImag = 20.0;

CylValue cyl_bessel(BesselKind kind, int order, cplx z);

/// Orders 0..max_order in one pass (values and derivatives). This is what
/// the dispersion relations and translation matrices use.
struct CylTable {
  std::vector<cplx> value;
  std::vector<cplx> derivative;

  /// Signed-order access using f_{-n} = (-1)^n f_n.
  cplx at(int n) const;
  cplx deriv_at(int n) const;
};

CylTable cyl_bessel_table(BesselKind kind, int max_order, cplx z);

/// Spherical Hankel function h_n^(1)(z) and its derivative, from the
/// closed elementary form.
CylValue sph_hankel1(int order, cplx z);

}  // namespace cavishift::specfun
