#include <algorithm>
#include <cmath>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::cavity2d {
namespace {

using polarization::PolarizationTensor;

// mu-weighted volume term plus the radiation (capacity) term, diagonal in
// the cos/sin basis.
cplx denominator(const DiskMode& mode) {
  const double ang = mode.m == 0 ? 2.0 * pi : pi;
  const cplx c2 = mode.c * mode.c;
  const cplx volume = mode.mu_m * c2 * ang * lommel_integral(mode.m, mode.k, mode.R);
  const cplx jR = specfun::cyl_bessel(specfun::BesselKind::J, mode.m, mode.k * mode.R).value;
  const CapacityCoeff cap = capacity_coeff(2, mode.m, mode.omega0, mode.R);
  const cplx radiation = c2 * jR * jR * ang * mode.R * cap.dz_domega / (2.0 * mode.omega0);
  const cplx d = volume + radiation;
  if (std::abs(d) <= 1e-13 * (std::abs(volume) + std::abs(radiation)))
    throw Error(ErrorKind::DegenerateDenominator,
                "shift denominator vanishes for m = " + std::to_string(mode.m));
  return d;
}

void check_placement(const DiskMode& mode, const ParticleScenario& s) {
  const double r = s.center.norm();
  const double ext = s.delta * shape_radius(s.shape);
  if (s.placement == Placement::Interior && !(r + ext < mode.R))
    throw Error(ErrorKind::DomainError, "interior particle is not strictly inside the cavity");
  if (s.placement == Placement::Exterior && !(r - ext > mode.R))
    throw Error(ErrorKind::DomainError, "exterior particle is not strictly outside the cavity");
}

}  // namespace

double shape_radius(const Shape& s) {
  if (const auto* d = std::get_if<DiskShape>(&s)) return d->radius;
  if (const auto* e = std::get_if<EllipseShape>(&s)) return std::max(e->p, e->q);
  const auto& c = std::get<CurveShape>(s);
  double r = 0;
  for (std::size_t i = 0; i < c.op->curve().size(); ++i)
    r = std::max(r, std::hypot(c.op->curve().x[i], c.op->curve().y[i]));
  return r;
}

cplx contrast(const DiskMode& mode, const ParticleScenario& s) {
  const cplx eps_c = s.material.eps_at(mode.omega0);
  if (eps_c == cplx{}) throw Error(ErrorKind::SingularContrast, "particle permittivity is zero");
  return s.placement == Placement::Interior ? mode.eps_m / eps_c : 1.0 / eps_c;
}

PolarizationTensor unit_polarization(const Shape& shape, cplx k) {
  if (const auto* d = std::get_if<DiskShape>(&shape)) return polarization::pt_disk(k, d->radius);
  if (const auto* e = std::get_if<EllipseShape>(&shape))
    return polarization::pt_ellipse(k, e->p, e->q, e->rotation);
  return std::get<CurveShape>(shape).op->polarization(k);
}

cplx perturbed_frequency(cplx omega0, cplx shift_sq) {
  const cplx w = std::sqrt(omega0 * omega0 + shift_sq);
  return std::abs(w - omega0) <= std::abs(-w - omega0) ? w : -w;
}

ShiftPrediction shift_matrix(const std::vector<DiskMode>& modes,
                             const std::vector<ParticleScenario>& scenarios) {
  if (modes.empty() || modes.size() > 2)
    throw Error(ErrorKind::DomainError, "shift_matrix takes one mode or a degenerate pair");
  if (scenarios.empty()) throw Error(ErrorKind::DomainError, "no particles given");
  const DiskMode& ref = modes.front();
  for (const auto& m : modes)
    if (m.m != ref.m || m.omega0 != ref.omega0)
      throw Error(ErrorKind::DomainError, "modes must share order and frequency");

  const auto n = static_cast<Eigen::Index>(modes.size());
  const cplx w0 = ref.omega0;
  const double delta0 = scenarios.front().delta;
  Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& s : scenarios) {
    check_placement(ref, s);
    const PolarizationTensor pt = unit_polarization(s.shape, contrast(ref, s));
    const bool inside = s.placement == Placement::Interior;
    const cplx host_coeff = inside ? 1.0 / ref.eps_m : cplx{1.0, 0.0};
    const cplx host_mu = inside ? ref.mu_m : cplx{1.0, 0.0};
    const cplx dmu = s.material.mu_c - host_mu;
    std::vector<FieldValue> v;
    for (const auto& m : modes) v.push_back(mode_eval(m, s.center));
    const double weight = delta0 > 0 ? (s.delta / delta0) * (s.delta / delta0) : 1.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) {
        const cplx grad = v[p].gradient.transpose() * pt.matrix * v[q].gradient;
        num(p, q) += weight * (host_coeff * grad -
                               w0 * w0 * pt.shape_area * dmu * v[p].value * v[q].value);
      }
  }
  Eigen::MatrixXcd dinv = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) dinv(p, p) = 1.0 / denominator(modes[p]);

  ShiftPrediction out;
  out.matrix = dinv * num;
  out.delta = delta0;
  if (n == 1) {
    out.eta = {out.matrix(0, 0)};
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(out.matrix, false);
    out.eta.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(out.eta.begin(), out.eta.end(),
              [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  }
  for (const cplx e : out.eta) out.omega_pred.push_back(perturbed_frequency(w0, delta0 * delta0 * e));
  return out;
}

}  // namespace cavishift::cavity2d
