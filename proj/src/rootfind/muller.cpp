#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavishift/errors.hpp"
#include "cavishift/rootfind.hpp"

namespace cavishift::rootfind {
namespace {

constexpr int kPolishSteps = 3;

std::string where(cplx z) {
  std::ostringstream s;
  s.precision(10);
  s << "at z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return s.str();
}

}  // namespace

RootResult muller(const ScalarFn& f, std::array<cplx, 3> seeds, double tol, int max_iter) {
  cplx x0 = seeds[0], x1 = seeds[1], x2 = seeds[2];
  if (x0 == x1 || x1 == x2 || x0 == x2)
    throw Error(ErrorKind::DomainError, "Muller seeds must be distinct");
  cplx f0 = f(x0), f1 = f(x1), f2 = f(x2);

  std::array<double, 3> mags{std::abs(f0), std::abs(f1), std::abs(f2)};
  std::sort(mags.begin(), mags.end());
  double scale = mags[1];
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = std::max(mags[2], 1.0);

  RootResult best{x2, std::abs(f2) / scale, 0, false};
  auto consider = [&](cplx x, cplx fx, int it) {
    const double r = std::abs(fx) / scale;
    if (r < best.residual || (r == best.residual && it > best.iterations)) best = {x, r, it, false};
  };
  consider(x0, f0, 0);
  consider(x1, f1, 0);
  best.iterations = 0;

  int polish = -1;
  for (int it = 1; it <= max_iter; ++it) {
    const cplx h1 = x1 - x0;
    const cplx h2 = x2 - x1;
    const cplx d1 = (f1 - f0) / h1;
    const cplx d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * f2);
    const cplx ep = b + disc;
    const cplx em = b - disc;
    const cplx e = std::abs(ep) >= std::abs(em) ? ep : em;
    if (e == cplx{0.0, 0.0}) {
      if (best.residual <= tol) break;
      throw Error(ErrorKind::DegenerateStep, "zero quadratic denominator " + where(x2));
    }
    const cplx dx = -2.0 * f2 / e;
    const cplx x3 = x2 + dx;
    const cplx f3 = f(x3);
    if (!std::isfinite(std::abs(f3)))
      throw Error(ErrorKind::DomainError, "non-finite function value " + where(x3));
    consider(x3, f3, it);
    x0 = x1;
    x1 = x2;
    x2 = x3;
    f0 = f1;
    f1 = f2;
    f2 = f3;
    if (f3 == cplx{0.0, 0.0}) break;
    if (std::abs(dx) <= 4e-16 * std::max(1.0, std::abs(x3)) && best.residual <= tol) break;
    if (polish < 0 && best.residual <= tol) polish = 0;
    if (polish >= 0 && ++polish > kPolishSteps) break;
    if (x0 == x1 || x1 == x2) break;
  }
  if (best.residual > tol)
    throw Error(ErrorKind::NoConvergence,
                "Muller residual " + std::to_string(best.residual) + " " + where(best.root));
  best.converged = true;
  return best;
}

RootResult muller(const ScalarFn& f, cplx z, cplx h, double tol, int max_iter) {
  return muller(f, {z - h, z + h, z}, tol, max_iter);
}

std::optional<RootResult> try_muller(const ScalarFn& f, std::array<cplx, 3> seeds, double tol,
                                     int max_iter) {
  try {
    return muller(f, seeds, tol, max_iter);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    return std::nullopt;
  }
}

ScalarFn deflate(ScalarFn f, std::vector<cplx> roots) {
  return [f = std::move(f), roots = std::move(roots)](cplx z) {
    cplx den{1.0, 0.0};
    for (const cplx r : roots) den *= (z - r);
    return f(z) / den;
  };
}

}  // namespace cavishift::rootfind
