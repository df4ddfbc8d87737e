#include <algorithm>
#include <cmath>
#include <limits>

#include "cavishift/errors.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/specfun.hpp"

namespace cavishift::multipole {
namespace {

using specfun::BesselKind;
using specfun::cyl_bessel_table;

// Mie numerator/denominator for orders 0..n_max from shared tables.
std::vector<MieTerms> mie_all(double radius, const Medium& in, const Medium& out, int n_max,
                              cplx omega) {
  const cplx ki = in.wavenumber(omega);
  const cplx ke = out.wavenumber(omega);
  const auto ji = cyl_bessel_table(BesselKind::J, n_max, ki * radius);
  const auto je = cyl_bessel_table(BesselKind::J, n_max, ke * radius);
  const auto he = cyl_bessel_table(BesselKind::H1, n_max, ke * radius);
  std::vector<MieTerms> t(static_cast<std::size_t>(n_max) + 1);
  for (int m = 0; m <= n_max; ++m) {
    const cplx inner = ki / in.eps * ji.derivative[m];
    const cplx outer = ke / out.eps * ji.value[m];
    t[m] = {inner * je.value[m] - outer * je.derivative[m],
            inner * he.value[m] - outer * he.derivative[m]};
  }
  return t;
}

Eigen::MatrixXd parity_basis(int n1, int n2, bool even) {
  const int size = (2 * n1 + 1) + (2 * n2 + 1);
  std::vector<Eigen::VectorXd> cols;
  const double s = 1.0 / std::sqrt(2.0);
  for (int g = 0; g < 2; ++g) {
    const int nmax = g == 0 ? n1 : n2;
    const int offset = g == 0 ? n1 : (2 * n1 + 1) + n2;  // index of order 0
    if (even) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
      v[offset] = 1.0;
      cols.push_back(v);
    }
    for (int n = 1; n <= nmax; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
      v[offset + n] = s;
      v[offset - n] = (even ? sign : -sign) * s;
      cols.push_back(v);
    }
  }
  Eigen::MatrixXd q(size, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = cols[j];
  return q;
}

Eigen::VectorXd row_scales(const Eigen::MatrixXcd& a) {
  Eigen::VectorXd s(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double m = a.row(i).cwiseAbs().maxCoeff();
    s[i] = m > 0 ? m : 1.0;
  }
  return s;
}

}  // namespace

TwoDiskSystem::TwoDiskSystem(TwoDiskGeometry geom, int n1, int n2)
    : geom_(std::move(geom)), n1_(n1), n2_(n2) {
  if (n1 < 0 || n2 < 0) throw Error(ErrorKind::DomainError, "truncations must be nonnegative");
  if (!(geom_.R > 0) || !(geom_.rho > 0)) throw Error(ErrorKind::DomainError, "radii must be positive");
  const bool outside = geom_.L > geom_.R + geom_.rho;
  if (!outside && !geom_.interior())
    throw Error(ErrorKind::DomainError, "particle overlaps the cavity boundary");
  q_even_ = parity_basis(n1_, n2_, true);
  q_odd_ = parity_basis(n1_, n2_, false);
}

Eigen::MatrixXcd TwoDiskSystem::matrix(cplx omega) const {
  const int s1 = 2 * n1_ + 1;
  const int s2 = 2 * n2_ + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(s1 + s2, s1 + s2);
  const Point2 o1{0.0, 0.0};
  const Point2 o2{geom_.L, 0.0};

  if (!geom_.interior()) {
    const auto cav = mie_all(geom_.R, geom_.cavity, geom_.exterior, n1_, omega);
    const auto par = mie_all(geom_.rho, geom_.particle, geom_.exterior, n2_, omega);
    const cplx k = geom_.exterior.wavenumber(omega);
    const auto t12 = graf_translate(o2, o1, k, n2_, n1_, Translation::OutgoingToRegular);
    const auto t21 = graf_translate(o1, o2, k, n1_, n2_, Translation::OutgoingToRegular);
    for (int m = -n1_; m <= n1_; ++m) {
      const MieTerms& t = cav[std::abs(m)];
      a(m + n1_, m + n1_) = t.denominator;
      a.row(m + n1_).segment(s1, s2) = t.numerator * t12.row(m + n1_);
    }
    for (int n = -n2_; n <= n2_; ++n) {
      const MieTerms& t = par[std::abs(n)];
      a(s1 + n + n2_, s1 + n + n2_) = t.denominator;
      a.row(s1 + n + n2_).segment(0, s1) = t.numerator * t21.row(n + n2_);
    }
    return a;
  }

  // Particle inside: unknowns are the regular cavity field a_m and the
  // particle's outgoing field d_n, both in the cavity medium.
  const auto cav = mie_all(geom_.R, geom_.cavity, geom_.exterior, n1_, omega);
  const auto par = mie_all(geom_.rho, geom_.particle, geom_.cavity, n2_, omega);
  const cplx ki = geom_.cavity.wavenumber(omega);
  const cplx ke = geom_.exterior.wavenumber(omega);
  const auto hi = cyl_bessel_table(BesselKind::H1, n1_, ki * geom_.R);
  const auto he = cyl_bessel_table(BesselKind::H1, n1_, ke * geom_.R);
  const auto tout = graf_translate(o2, o1, ki, n2_, n1_, Translation::OutgoingToOutgoing);
  const auto treg = graf_translate(o1, o2, ki, n1_, n2_, Translation::RegularToRegular);
  for (int p = -n1_; p <= n1_; ++p) {
    const int q = std::abs(p);
    const cplx nr = ki / geom_.cavity.eps * hi.derivative[q] * he.value[q] -
                    ke / geom_.exterior.eps * hi.value[q] * he.derivative[q];
    a(p + n1_, p + n1_) = cav[q].denominator;
    a.row(p + n1_).segment(s1, s2) = nr * tout.row(p + n1_);
  }
  for (int n = -n2_; n <= n2_; ++n) {
    const MieTerms& t = par[std::abs(n)];
    a(s1 + n + n2_, s1 + n + n2_) = t.denominator;
    a.row(s1 + n + n2_).segment(0, s1) = t.numerator * treg.row(n + n2_);
  }
  return a;
}

Eigen::MatrixXd TwoDiskSystem::basis(Block b) const { return b == Block::Even ? q_even_ : q_odd_; }

Eigen::MatrixXcd TwoDiskSystem::block(Block b, cplx omega) const {
  const Eigen::MatrixXcd a = matrix(omega);
  if (b == Block::Full) return a;
  const Eigen::MatrixXcd q = basis(b).cast<cplx>();
  return q.transpose() * a * q;
}

void TwoDiskSystem::freeze_scaling(cplx omega_ref) {
  // Rows first, then columns of the row-scaled block: a two-sided
  // equilibration at one frequency, kept fixed so the result stays analytic.
  auto two_sided = [&](Block b, Eigen::VectorXd& rows, Eigen::VectorXd& cols) {
    Eigen::MatrixXcd a = block(b, omega_ref);
    rows = row_scales(a);
    for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= rows[i];
    cols = row_scales(a.transpose());
  };
  two_sided(Block::Full, scale_full_, col_full_);
  two_sided(Block::Even, scale_even_, col_even_);
  two_sided(Block::Odd, scale_odd_, col_odd_);
}

const Eigen::VectorXd& TwoDiskSystem::col_scales(Block b) const {
  switch (b) {
    case Block::Even: return col_even_;
    case Block::Odd: return col_odd_;
    case Block::Full: break;
  }
  return col_full_;
}

const Eigen::VectorXd& TwoDiskSystem::scales(Block b) const {
  switch (b) {
    case Block::Even: return scale_even_;
    case Block::Odd: return scale_odd_;
    case Block::Full: break;
  }
  return scale_full_;
}

Eigen::MatrixXcd TwoDiskSystem::scaled_block(Block b, cplx omega) const {
  Eigen::MatrixXcd a = block(b, omega);
  const Eigen::VectorXd& s = scales(b);
  if (s.size() != a.rows()) throw Error(ErrorKind::DomainError, "call freeze_scaling first");
  const Eigen::VectorXd& c = col_scales(b);
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= s[i];
  for (Eigen::Index j = 0; j < a.cols(); ++j) a.col(j) /= c[j];
  return a;
}

cplx TwoDiskSystem::determinant(Block b, cplx omega) const {
  return scaled_block(b, omega).partialPivLu().determinant();
}

namespace {

bool near_hankel_zero(const TwoDiskGeometry& g, cplx omega, int n1, int n2, double tol) {
  const cplx ke = g.exterior.wavenumber(omega);
  auto check = [&](double radius, int nmax, cplx k) {
    const auto h = cyl_bessel_table(BesselKind::H1, nmax, k * radius);
    for (int n = 0; n <= nmax; ++n)
      if (std::abs(h.value[n]) < tol * std::abs(radius * h.derivative[n])) return true;
    return false;
  };
  if (check(g.R, n1, ke)) return true;
  const cplx kp = g.interior() ? g.cavity.wavenumber(omega) : ke;
  return check(g.rho, n2, kp);
}

rootfind::RootResult refine(const TwoDiskSystem& sys, Block b, cplx z, double h, double tol) {
  const rootfind::ScalarFn f = [&sys, b](cplx w) { return sys.determinant(b, w); };
  return rootfind::muller(f, {z - h, z + h, z + cplx(0.0, h)}, tol, 100);
}

}  // namespace

OracleReport two_disk_resonances(const TwoDiskGeometry& geom, cplx seed,
                                 const OracleOptions& opts) {
  const int n1 = opts.n1 >= 0 ? opts.n1 : opts.mode_order + 12;
  const int n2 = opts.n2;
  // Scales are frozen on the contour: the seed itself may be a root, and a
  // column scale taken there would divide the zero out.
  const cplx ref = seed + opts.radius;
  TwoDiskSystem sys(geom, n1, n2);
  sys.freeze_scaling(ref);
  TwoDiskSystem finer(geom, n1 + 2, n2 + 2);
  finer.freeze_scaling(ref);

  const double h = 1e-2 * opts.radius;
  OracleReport report;
  for (const Block b : {Block::Even, Block::Odd}) {
    rootfind::BeynOptions bo;
    bo.quadrature_points = opts.quadrature_points;
    bo.probe_columns = 4;
    bo.check_quadrature = false;
    const int block_size = static_cast<int>(sys.scaled_block(b, seed).rows());
    std::vector<cplx> coarse;
    for (;;) {
      try {
        coarse = rootfind::beyn([&](cplx w) { return sys.scaled_block(b, w); },
                                {seed, opts.radius}, bo);
        break;
      } catch (const Error& e) {
        // More roots than probes inside the contour: widen the probe space.
        if (e.kind() != ErrorKind::RankOverflow || 2 * bo.probe_columns > block_size) throw;
        bo.probe_columns *= 2;
      }
    }
    for (const cplx c : coarse) {
      const auto r = refine(sys, b, c, h, opts.tol);
      if (std::abs(r.root - seed) > opts.radius) continue;
      const bool dup = std::any_of(report.roots.begin(), report.roots.end(), [&](const OracleRoot& o) {
        return o.block == b && std::abs(o.result.root - r.root) < 1e-8;
      });
      if (dup) continue;
      if (near_hankel_zero(geom, r.root, n1, n2, opts.spurious_tol)) {
        report.spurious.push_back(r.root);
        continue;
      }
      OracleRoot o{r, b, 0.0};
      try {
        o.stability_shift = std::abs(refine(finer, b, r.root, h, opts.tol).root - r.root);
      } catch (const Error&) {
        o.stability_shift = std::numeric_limits<double>::infinity();
      }
      (o.stability_shift < opts.stability_tol ? report.roots : report.unstable).push_back(o);
    }
  }
  std::sort(report.roots.begin(), report.roots.end(), [&](const OracleRoot& a, const OracleRoot& b) {
    return std::abs(a.result.root - seed) < std::abs(b.result.root - seed);
  });
  return report;
}

}  // namespace cavishift::multipole
