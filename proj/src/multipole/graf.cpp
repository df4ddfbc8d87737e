#include <cmath>

#include "cavishift/errors.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::multipole {

Eigen::MatrixXcd graf_translate(Point2 from, Point2 to, cplx k, int n_max, int truncation,
                                Translation kind) {
  if (n_max < 0 || truncation < 0)
    throw Error(ErrorKind::DomainError, "orders must be nonnegative");
  const Point2 b = to - from;
  const double dist = b.norm();
  if (dist == 0.0) {
    if (kind == Translation::OutgoingToRegular)
      throw Error(ErrorKind::ValidityViolation, "outgoing re-expansion about its own center");
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * truncation + 1, 2 * n_max + 1);
    for (int m = -std::min(n_max, truncation); m <= std::min(n_max, truncation); ++m)
      t(m + truncation, m + n_max) = 1.0;
    return t;
  }
  const auto z = specfun::cyl_bessel_table(
      kind == Translation::OutgoingToRegular ? specfun::BesselKind::H1 : specfun::BesselKind::J,
      n_max + truncation, k * dist);
  const double phi = b.angle();
  Eigen::MatrixXcd t(2 * truncation + 1, 2 * n_max + 1);
  for (int m = -truncation; m <= truncation; ++m)
    for (int n = -n_max; n <= n_max; ++n)
      t(m + truncation, n + n_max) = z.at(n - m) * std::polar(1.0, (n - m) * phi);
  return t;
}

void check_validity(Point2 from, Point2 to, Point2 point, Translation kind) {
  const double sep = (to - from).norm();
  const double r = (point - to).norm();
  if (kind == Translation::OutgoingToRegular && !(r < sep))
    throw Error(ErrorKind::ValidityViolation,
                "regular re-expansion needs |x - to| < |to - from|");
  if (kind == Translation::OutgoingToOutgoing && !(r > sep))
    throw Error(ErrorKind::ValidityViolation,
                "outgoing re-expansion needs |x - to| > |to - from|");
}

}  // namespace cavishift::multipole
