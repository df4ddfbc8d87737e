#include <algorithm>
#include <cmath>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::cavity2d {
namespace {

using specfun::BesselKind;
using specfun::cyl_bessel;

// Relative size below which H_m(wR) counts as a zero: the spurious locus.
constexpr double kSpuriousTol = 1e-6;

double angular_weight(int m) { return m == 0 ? 2.0 * pi : pi; }

cplx angular(Parity p, int m, double theta) {
  return p == Parity::Cos ? std::cos(m * theta) : std::sin(m * theta);
}

cplx angular_deriv(Parity p, int m, double theta) {
  return p == Parity::Cos ? -m * std::sin(m * theta) : m * std::cos(m * theta);
}

}  // namespace

DiskMode DiskMode::partner() const {
  DiskMode o = *this;
  if (m != 0) o.parity = parity == Parity::Cos ? Parity::Sin : Parity::Cos;
  return o;
}

cplx dispersion(int m, cplx eps_m, cplx mu_m, double R, cplx omega) {
  const cplx k = omega * std::sqrt(eps_m * mu_m);
  const auto j = cyl_bessel(BesselKind::J, m, k * R);
  const auto h = cyl_bessel(BesselKind::H1, m, omega * R);
  return k / eps_m * j.derivative * h.value - omega * j.value * h.derivative;
}

cplx lommel_integral(int m, cplx k, double R) {
  const cplx x = k * R;
  const auto j = cyl_bessel(BesselKind::J, m, x);
  return 0.5 * R * R *
         (j.derivative * j.derivative +
          (1.0 - static_cast<double>(m * m) / (x * x)) * j.value * j.value);
}

DiskMode make_mode(int m, cplx eps_m, cplx mu_m, double R, cplx omega0, Parity parity) {
  if (m < 0) throw Error(ErrorKind::DomainError, "angular order must be nonnegative");
  DiskMode d;
  d.m = m;
  d.omega0 = omega0;
  d.k = omega0 * std::sqrt(eps_m * mu_m);
  d.R = R;
  d.eps_m = eps_m;
  d.mu_m = mu_m;
  d.parity = m == 0 ? Parity::Cos : parity;
  d.c = 1.0 / std::sqrt(angular_weight(m) * lommel_integral(m, d.k, R));
  return d;
}

ModeSearch disk_modes(int m, cplx eps_m, cplx mu_m, double R, const ComplexBox& search,
                      const rootfind::BoxSearchOptions& opts) {
  if (!search.valid()) throw Error(ErrorKind::DomainError, "empty search box");
  if (search.im_max >= 0.0)
    throw Error(ErrorKind::DomainError, "mode search box must lie in the lower half-plane");
  if (search.re_min <= 0.0)
    throw Error(ErrorKind::DomainError, "mode search box must avoid 0 and the branch cut");
  const rootfind::ScalarFn f = [=](cplx w) { return dispersion(m, eps_m, mu_m, R, w); };
  ModeSearch out;
  for (const auto& r : rootfind::box_roots(f, search, opts)) {
    const auto h = cyl_bessel(BesselKind::H1, m, r.root * R);
    if (std::abs(h.value) < kSpuriousTol * std::abs(h.derivative * R)) {
      out.spurious.push_back(r.root);
      continue;
    }
    out.modes.push_back(make_mode(m, eps_m, mu_m, R, r.root));
  }
  return out;
}

FieldValue mode_eval(const DiskMode& mode, Point2 p) {
  const double r = p.norm();
  const int m = mode.m;
  FieldValue out;
  if (r == 0.0) {
    out.value = m == 0 ? mode.c : cplx{};
    out.gradient.setZero();
    if (m == 1) {
      // c J_1(kr) cos(theta) ~ c (k/2) x
      const cplx g = mode.c * mode.k * 0.5;
      out.gradient = mode.parity == Parity::Cos ? Eigen::Vector2cd(g, 0.0)
                                                : Eigen::Vector2cd(0.0, g);
    }
    return out;
  }
  const double theta = p.angle();
  cplx f, fr;
  if (r <= mode.R) {
    const auto j = cyl_bessel(BesselKind::J, m, mode.k * r);
    f = mode.c * j.value;
    fr = mode.c * mode.k * j.derivative;
  } else {
    const cplx jR = cyl_bessel(BesselKind::J, m, mode.k * mode.R).value;
    const cplx hR = cyl_bessel(BesselKind::H1, m, mode.omega0 * mode.R).value;
    const auto h = cyl_bessel(BesselKind::H1, m, mode.omega0 * r);
    const cplx C = mode.c * jR / hR;
    f = C * h.value;
    fr = C * mode.omega0 * h.derivative;
  }
  const cplx a = angular(mode.parity, m, theta);
  const cplx da = angular_deriv(mode.parity, m, theta);
  out.value = f * a;
  const cplx dr = fr * a;
  const cplx dt = f * da / r;
  const double ct = std::cos(theta), st = std::sin(theta);
  out.gradient = Eigen::Vector2cd(dr * ct - dt * st, dr * st + dt * ct);
  return out;
}

}  // namespace cavishift::cavity2d
