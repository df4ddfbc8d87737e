#include "cavishift/slab1d.hpp"

#include <algorithm>
#include <cmath>

#include "cavishift/errors.hpp"

namespace cavishift::slab1d {
namespace {

cplx reflection_ratio(const SlabCavity& c) {
  const cplx beta = c.medium.index() / c.medium.eps;
  if (std::abs(beta - 1.0) < 1e-14 || std::abs(beta + 1.0) < 1e-14)
    throw Error(ErrorKind::SingularContrast, "n/eps_m = +-1 makes the boundary ratio degenerate");
  return (beta + 1.0) / (beta - 1.0);
}

void validate(const SlabCavity& c) {
  if (!(c.b > c.a)) throw Error(ErrorKind::DomainError, "slab requires a < b");
  if (c.medium.eps == cplx{} || c.medium.mu == cplx{})
    throw Error(ErrorKind::DomainError, "slab medium must be nonzero");
}

}  // namespace

cplx SlabMode::value(double x) const {
  const cplx k = omega0 * index();
  return A * std::exp(I * k * x) + B * std::exp(-I * k * x);
}

cplx SlabMode::derivative(double x) const {
  const cplx k = omega0 * index();
  return I * k * (A * std::exp(I * k * x) - B * std::exp(-I * k * x));
}

cplx SlabMode::integral_sq() const {
  const cplx k = omega0 * index();
  const double a = cavity.a, b = cavity.b;
  return A * A * (std::exp(2.0 * I * k * b) - std::exp(2.0 * I * k * a)) / (2.0 * I * k) +
         2.0 * A * B * (b - a) -
         B * B * (std::exp(-2.0 * I * k * b) - std::exp(-2.0 * I * k * a)) / (2.0 * I * k);
}

cplx transfer_residual(const std::vector<Layer>& layers, cplx omega) {
  // State (u, u'/eps) is continuous across interfaces.
  cplx u{1.0, 0.0};
  cplx f = -I * omega;
  for (const Layer& l : layers) {
    const cplx k = omega * l.medium.index();
    const cplx ck = std::cos(k * l.thickness);
    // sin(k l)/k stays finite as k -> 0
    const cplx sk = (std::abs(k) < 1e-300) ? cplx(l.thickness) : std::sin(k * l.thickness) / k;
    const cplx un = ck * u + l.medium.eps * sk * f;
    const cplx fn = -(k * k / l.medium.eps) * sk * u + ck * f;
    u = un;
    f = fn;
  }
  return f - I * omega * u;
}

cplx closed_form_resonance(const SlabCavity& cavity, int q) {
  validate(cavity);
  const cplx rho = reflection_ratio(cavity);
  const cplx n = cavity.medium.index();
  // Principal Log; a signed zero in Im rho must not flip the branch.
  const cplx log_rho{std::log(std::abs(rho)), rho.imag() == 0.0 && rho.real() < 0 ? pi : std::arg(rho)};
  return (log_rho + I * pi * static_cast<double>(q)) / (I * n * cavity.length());
}

SlabMode make_mode(const SlabCavity& cavity, cplx omega0) {
  validate(cavity);
  const cplx rho = reflection_ratio(cavity);
  SlabMode m;
  m.cavity = cavity;
  m.omega0 = omega0;
  const cplx k = omega0 * cavity.medium.index();
  m.A = 1.0;
  m.B = rho * std::exp(2.0 * I * k * cavity.a);
  const cplx s = std::sqrt(m.integral_sq());
  m.A /= s;
  m.B /= s;
  m.norm = m.integral_sq();
  return m;
}

std::vector<SlabMode> slab_resonances(const SlabCavity& cavity, const ComplexBox& search) {
  validate(cavity);
  if (!search.valid()) throw Error(ErrorKind::DomainError, "empty search box");
  if (search.im_max >= 0.0)
    throw Error(ErrorKind::DomainError, "slab search box must lie in the lower half-plane");
  // The lattice spacing in omega is pi / (n L); walk q until the lattice
  // leaves the box on both sides.
  const cplx n = cavity.medium.index();
  const cplx step = pi / (n * cavity.length());
  const cplx base = closed_form_resonance(cavity, 0);
  const double span = std::hypot(search.re_max - search.re_min, search.im_max - search.im_min) +
                      std::abs(base) + std::hypot(search.re_max, search.im_min);
  const int qmax = static_cast<int>(std::ceil(span / std::abs(step))) + 2;

  const std::vector<Layer> layers{{cavity.medium, cavity.length()}};
  const rootfind::ScalarFn g = [&layers](cplx w) { return transfer_residual(layers, w); };
  std::vector<SlabMode> modes;
  for (int q = -qmax; q <= qmax; ++q) {
    const cplx w = base + static_cast<double>(q) * step;
    if (!search.contains(w)) continue;
    const cplx h = 1e-3 * std::abs(step);
    const auto r = rootfind::try_muller(g, {w - h, w + h, w + I * h}, 1e-12, 100);
    const cplx root = r ? r->root : w;
    if (!search.contains(root) || std::abs(root) < 1e-12) continue;
    modes.push_back(make_mode(cavity, root));
  }
  std::sort(modes.begin(), modes.end(),
            [](const SlabMode& x, const SlabMode& y) { return x.omega0.real() < y.omega0.real(); });
  return modes;
}

rootfind::RootResult slab_perturbed_exact(const SlabCavity& cavity, const SlabParticle& particle,
                                          cplx seed, double tol) {
  validate(cavity);
  const double lo = particle.x0 - 0.5 * particle.delta;
  const double hi = particle.x0 + 0.5 * particle.delta;
  if (!(particle.delta > 0.0) || particle.delta >= cavity.length() || lo <= cavity.a ||
      hi >= cavity.b)
    throw Error(ErrorKind::RegionCollapse, "particle (" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + ") does not fit in the slab");
  const std::vector<Layer> layers{{cavity.medium, lo - cavity.a},
                                  {particle.material, particle.delta},
                                  {cavity.medium, cavity.b - hi}};
  const rootfind::ScalarFn g = [&layers](cplx w) { return transfer_residual(layers, w); };
  const cplx h = 1e-4 * std::max(1.0, std::abs(seed));
  return rootfind::muller(g, {seed - h, seed + h, seed + I * h}, tol, 200);
}

cplx slab_shift(const SlabMode& mode, const SlabParticle& particle, bool radiation_term) {
  const Medium& m = mode.cavity.medium;
  const Medium& c = particle.material;
  const cplx alpha = 1.0 - c.eps / m.eps;
  const cplx u = mode.value(particle.x0);
  const cplx du = mode.derivative(particle.x0);
  const cplx w0 = mode.omega0;
  const cplx num = alpha * du * du - w0 * w0 * m.eps * (c.mu - m.mu) * u * u;
  const cplx volume = 2.0 * w0 * m.mu * m.eps * mode.integral_sq();
  const cplx ua = mode.value(mode.cavity.a);
  const cplx ub = mode.value(mode.cavity.b);
  const cplx radiation = radiation_term ? I * m.eps * (ua * ua + ub * ub) : cplx{};
  const cplx den = volume + radiation;
  if (std::abs(den) <= 1e-13 * (std::abs(volume) + std::abs(radiation)))
    throw Error(ErrorKind::DegenerateDenominator, "shift denominator vanishes");
  return num / den;
}

}  // namespace cavishift::slab1d
