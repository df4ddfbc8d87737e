#include "cavishift/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavishift/errors.hpp"
#include "cavishift/simd.hpp"

namespace cavishift::polarization {
namespace {

std::string show(cplx z) {
  std::ostringstream s;
  s.precision(12);
  s << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return s.str();
}

}  // namespace

PolarizationTensor pt_disk(cplx k, double radius) {
  if (std::abs(k + 1.0) == 0.0)
    throw Error(ErrorKind::SingularContrast, "disk tensor has a pole at k = -1");
  const double area = pi * radius * radius;
  PolarizationTensor t;
  t.shape_area = area;
  t.matrix = Eigen::MatrixXcd::Identity(2, 2) * (2.0 * area * (k - 1.0) / (k + 1.0));
  return t;
}

PolarizationTensor pt_ellipse(cplx k, double p, double q, double rotation) {
  if (!(p > 0) || !(q > 0)) throw Error(ErrorKind::DomainError, "semi-axes must be positive");
  const cplx d1 = p + k * q, d2 = q + k * p;
  if (std::abs(d1) == 0.0 || std::abs(d2) == 0.0)
    throw Error(ErrorKind::SingularContrast, "ellipse tensor pole at k = " + show(k));
  const double area = pi * p * q;
  Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
  diag(0, 0) = area * (k - 1.0) * (p + q) / d1;
  diag(1, 1) = area * (k - 1.0) * (p + q) / d2;
  Eigen::Matrix2d r;
  r << std::cos(rotation), -std::sin(rotation), std::sin(rotation), std::cos(rotation);
  const Eigen::Matrix2cd rc = r.cast<cplx>();
  PolarizationTensor t;
  t.shape_area = area;
  t.matrix = rc * diag * rc.transpose();
  return t;
}

PolarizationTensor pt_sphere(cplx k, double radius) {
  if (std::abs(k + 2.0) == 0.0)
    throw Error(ErrorKind::SingularContrast, "ball tensor has a pole at k = -2");
  const double vol = 4.0 / 3.0 * pi * radius * radius * radius;
  PolarizationTensor t;
  t.shape_area = vol;
  t.matrix = Eigen::MatrixXcd::Identity(3, 3) * (3.0 * vol * (k - 1.0) / (k + 2.0));
  return t;
}

NeumannPoincare::NeumannPoincare(BoundaryCurve curve) : curve_(std::move(curve)) {
  curve_.validate();
  const std::size_t n = curve_.size();
  // Row-major scratch, then copied into the column-major Eigen matrix.
  std::vector<double> row(n);
  k_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    simd::np_kernel_row(curve_.x[i], curve_.y[i], curve_.nx[i], curve_.ny[i], curve_.x.data(),
                        curve_.y.data(), row.data(), n);
    for (std::size_t j = 0; j < n; ++j) k_(i, j) = row[j] * curve_.w[j];
  }
  if (!curve_.curvature.empty()) {
    for (std::size_t i = 0; i < n; ++i) k_(i, i) = curve_.curvature[i] / (4.0 * pi) * curve_.w[i];
  } else {
    // Gauss: the double-layer potential of 1 is 1/2 on the curve, i.e. each
    // column of the adjoint discretization sums to 1/2.
    for (std::size_t j = 0; j < n; ++j) {
      double off = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (i != j) off += k_(i, j);
      k_(j, j) = 0.5 - off;
    }
  }
}

const std::vector<cplx>& NeumannPoincare::spectrum() const {
  std::call_once(spectrum_once_, [this] {
    Eigen::EigenSolver<Eigen::MatrixXd> es(k_, false);
    const auto& ev = es.eigenvalues();
    spectrum_.assign(ev.data(), ev.data() + ev.size());
    std::sort(spectrum_.begin(), spectrum_.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
  });
  return spectrum_;
}

PolarizationTensor NeumannPoincare::polarization(cplx k, double singular_tol) const {
  PolarizationTensor t;
  t.shape_area = curve_.area();
  t.matrix = Eigen::MatrixXcd::Zero(2, 2);
  if (k == cplx{1.0, 0.0}) return t;
  const cplx lambda = (k + 1.0) / (2.0 * (k - 1.0));

  // The eigenvalue 1/2 belongs to the constant density, which the normal
  // components never excite (they integrate to zero).
  const auto& spec = spectrum();
  for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
    if (std::abs(lambda - spec[i]) < singular_tol)
      throw Error(ErrorKind::NearSingularOperator,
                  "lambda = " + show(lambda) + " is within " + std::to_string(singular_tol) +
                      " of the Neumann-Poincare eigenvalue " + show(spec[i]));
  }

  const auto n = static_cast<Eigen::Index>(curve_.size());
  Eigen::MatrixXcd a = -k_.cast<cplx>();
  a.diagonal().array() += lambda;
  Eigen::MatrixXcd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i, 0) = curve_.nx[i];
    rhs(i, 1) = curve_.ny[i];
  }
  const Eigen::MatrixXcd phi = a.partialPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi[2] = {curve_.x[i] * curve_.w[i], curve_.y[i] * curve_.w[i]};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) t.matrix(r, c) += xi[r] * phi(i, c);
  }
  return t;
}

PolarizationTensor pt_numeric(const BoundaryCurve& curve, cplx k) {
  return NeumannPoincare(curve).polarization(k);
}

}  // namespace cavishift::polarization
