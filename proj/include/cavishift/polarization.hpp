#pragma once

#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "cavishift/common.hpp"
#include "cavishift/curve.hpp"

/// Polarization tensors M(k, B) of small inclusions. k is the contrast
/// (eps_m/eps_c for particles inside the cavity, 1/eps_c outside).
namespace cavishift::polarization {

struct PolarizationTensor {
  Eigen::MatrixXcd matrix;  // d x d
  double shape_area = 0;    // |B| (area in 2D, volume in 3D)
};

/// 2|B| (k-1)/(k+1) I. SingularContrast at k = -1.
PolarizationTensor pt_disk(cplx k, double radius);

/// R(theta) |B| (k-1) diag((p+q)/(p+kq), (p+q)/(q+kp)) R(theta)^T.
/// SingularContrast where a denominator vanishes.
PolarizationTensor pt_ellipse(cplx k, double p, double q, double rotation);

/// 3|B| (k-1)/(k+2) I for a ball. SingularContrast at k = -2.
PolarizationTensor pt_sphere(cplx k, double radius);

/// Nystrom discretization of the adjoint Neumann-Poincare operator on a
/// curve. Holds the matrix and, once requested, its spectrum, so contrast
/// sweeps on one shape share the work. Safe to share across threads.
class NeumannPoincare {
 public:
  explicit NeumannPoincare(BoundaryCurve curve);

  const BoundaryCurve& curve() const { return curve_; }
  const Eigen::MatrixXd& matrix() const { return k_; }
  /// Eigenvalues of the discrete operator (computed on first use).
  const std::vector<cplx>& spectrum() const;

  /// M_ij = sum w x_i phi_j with (lambda I - K*) phi_j = nu_j,
  /// lambda = (k+1)/(2(k-1)). Throws NearSingularOperator when lambda is
  /// within `singular_tol` of an eigenvalue that nu can excite.
  PolarizationTensor polarization(cplx k, double singular_tol = 1e-9) const;

 private:
  BoundaryCurve curve_;
  Eigen::MatrixXd k_;
  mutable std::once_flag spectrum_once_;
  mutable std::vector<cplx> spectrum_;
};

PolarizationTensor pt_numeric(const BoundaryCurve& curve, cplx k);

}  // namespace cavishift::polarization
