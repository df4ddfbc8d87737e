#include <cmath>

#include "cavishift/errors.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::multipole {

MieTerms mie_terms(double radius, const Medium& interior, const Medium& exterior, int m,
                   cplx omega) {
  using specfun::BesselKind;
  const int a = std::abs(m);
  const cplx ki = interior.wavenumber(omega);
  const cplx ke = exterior.wavenumber(omega);
  const auto ji = specfun::cyl_bessel(BesselKind::J, a, ki * radius);
  const auto je = specfun::cyl_bessel(BesselKind::J, a, ke * radius);
  const auto he = specfun::cyl_bessel(BesselKind::H1, a, ke * radius);
  const cplx inner = ki / interior.eps * ji.derivative;
  const cplx outer = ke / exterior.eps * ji.value;
  return {inner * je.value - outer * je.derivative, inner * he.value - outer * he.derivative};
}

cplx mie_coeff(double radius, const Medium& interior, const Medium& exterior, int m,
               cplx omega) {
  const MieTerms t = mie_terms(radius, interior, exterior, m, omega);
  if (std::abs(t.denominator) <= 1e-14 * std::abs(t.numerator))
    throw Error(ErrorKind::PoleOfDenominator,
                "isolated-disk resonance for order " + std::to_string(m));
  return -t.numerator / t.denominator;
}

}  // namespace cavishift::multipole
