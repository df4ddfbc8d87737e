#include <cmath>
#include <cstdlib>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::cavity2d {

CapacityCoeff capacity_coeff(int d, int m, cplx omega, double R) {
  if (d != 2 && d != 3) throw Error(ErrorKind::DomainError, "dimension must be 2 or 3");
  if (!(R > 0)) throw Error(ErrorKind::DomainError, "radius must be positive");
  const int order = std::abs(m);
  const cplx x = omega * R;
  cplx h, dh, ddh;
  if (d == 2) {
    const auto v = specfun::cyl_bessel(specfun::BesselKind::H1, order, x);
    h = v.value;
    dh = v.derivative;
    ddh = -dh / x - (1.0 - static_cast<double>(order * order) / (x * x)) * h;
  } else {
    const auto v = specfun::sph_hankel1(order, x);
    h = v.value;
    dh = v.derivative;
    ddh = -2.0 / x * dh - (1.0 - static_cast<double>(order * (order + 1)) / (x * x)) * h;
  }
  if (std::abs(h) <= 1e-13 * std::abs(x * dh))
    throw Error(ErrorKind::PoleOfSymbol, "Hankel function vanishes at omega R = " +
                                             std::to_string(x.real()) + std::to_string(x.imag()) +
                                             "i");
  const cplx ratio = dh / h;
  return {omega * ratio, ratio + x * (ddh / h - ratio * ratio)};
}

}  // namespace cavishift::cavity2d
