#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cavishift/common.hpp"
#include "cavishift/rootfind.hpp"

/// Cylindrical-harmonic solver for a disk cavity with one small disk
/// particle (outside or inside the cavity), used as the reference against
/// which the asymptotic shifts are scored.
namespace cavishift::multipole {

struct MieTerms {
  cplx numerator;
  cplx denominator;
};

/// Numerator and denominator of the single-disk response, k = w sqrt(eps mu)
/// on each side: s_m = -N/D.
MieTerms mie_terms(double radius, const Medium& interior, const Medium& exterior, int m,
                   cplx omega);

/// s_m = -N/D. Throws PoleOfDenominator at an isolated-disk resonance.
cplx mie_coeff(double radius, const Medium& interior, const Medium& exterior, int m, cplx omega);

enum class Translation {
  OutgoingToRegular,   // valid for |x - to| < |to - from|
  OutgoingToOutgoing,  // valid for |x - to| > |to - from|
  RegularToRegular,    // valid everywhere
};

/// T with Z_n(k|x - from|) e^{i n theta_from} = sum_m T(m, n) W_m(k|x - to|) e^{i m theta_to},
/// rows m = -truncation..truncation, columns n = -n_max..n_max.
/// Entries are Z_{n-m}(k|b|) e^{i(n-m) arg b} with b = to - from and Z = H1
/// for OutgoingToRegular, J otherwise.
Eigen::MatrixXcd graf_translate(Point2 from, Point2 to, cplx k, int n_max, int truncation,
                                Translation kind = Translation::OutgoingToRegular);

/// Throws ValidityViolation if `point` lies outside the region where the
/// re-expansion about `to` converges.
void check_validity(Point2 from, Point2 to, Point2 point, Translation kind);

struct TwoDiskGeometry {
  double R = 1;
  Medium cavity;
  double L = 2;       // particle center (L, 0)
  double rho = 0.1;   // particle radius
  Medium particle;
  Medium exterior = vacuum;

  bool interior() const { return L + rho < R; }
};

enum class Block { Full, Even, Odd };

/// Truncated system after eliminating the interior coefficients.
/// Exterior particle: unknowns are the outgoing amplitudes of the cavity
/// (|m| <= N1) and particle (|n| <= N2). Interior particle: the regular
/// cavity field (|m| <= N1) and the particle's outgoing field (|n| <= N2).
/// Mirror symmetry about the x-axis splits it into even (cos) and odd (sin)
/// blocks.
class TwoDiskSystem {
 public:
  TwoDiskSystem(TwoDiskGeometry geom, int n1, int n2);

  const TwoDiskGeometry& geometry() const { return geom_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }

  Eigen::MatrixXcd matrix(cplx omega) const;
  Eigen::MatrixXcd block(Block b, cplx omega) const;

  /// Fix row and column scales from the block at omega_ref so the scaled
  /// determinant stays analytic in omega.
  void freeze_scaling(cplx omega_ref);
  Eigen::MatrixXcd scaled_block(Block b, cplx omega) const;
  cplx determinant(Block b, cplx omega) const;

 private:
  Eigen::MatrixXd basis(Block b) const;
  const Eigen::VectorXd& scales(Block b) const;
  const Eigen::VectorXd& col_scales(Block b) const;

  TwoDiskGeometry geom_;
  int n1_, n2_;
  Eigen::VectorXd scale_full_, scale_even_, scale_odd_;
  Eigen::VectorXd col_full_, col_even_, col_odd_;
  Eigen::MatrixXd q_even_, q_odd_;
};

struct OracleOptions {
  int n1 = -1;          // default m + 12
  int n2 = 6;
  double radius = 0.25;  // Beyn circle around the seed
  int quadrature_points = 48;
  double tol = 1e-10;  // Muller, relative to the determinant near the seed
  double stability_tol = 1e-8;
  double spurious_tol = 1e-6;
  /// Angular order of the seed mode, used for the default truncation.
  int mode_order = 0;
};

struct OracleRoot {
  rootfind::RootResult result;
  Block block = Block::Even;
  double stability_shift = 0;  // |w(N1+2, N2+2) - w(N1, N2)|
};

struct OracleReport {
  std::vector<OracleRoot> roots;     // accepted, sorted by distance to the seed
  std::vector<OracleRoot> unstable;  // failed the truncation check
  std::vector<cplx> spurious;        // near a Hankel-denominator zero
};

/// Resonances of the two-disk system near `seed`, found per parity block by
/// a contour solve and refined by Muller on the scaled determinant.
OracleReport two_disk_resonances(const TwoDiskGeometry& geom, cplx seed,
                                 const OracleOptions& opts = {});

}  // namespace cavishift::multipole
