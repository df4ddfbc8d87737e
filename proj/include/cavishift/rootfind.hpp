#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cavishift/common.hpp"

namespace cavishift::rootfind {

using ScalarFn = std::function<cplx(cplx)>;
using MatrixFn = std::function<Eigen::MatrixXcd(cplx)>;

/// residual is |f(root)| divided by the seed scale (median |f| over the
/// seeds), so converged implies residual <= tol.
struct RootResult {
  cplx root;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

/// Muller iteration from three distinct seeds. Once the tolerance is met a
/// few polishing steps are taken and the best iterate is returned.
/// Throws NoConvergence or DegenerateStep.
RootResult muller(const ScalarFn& f, std::array<cplx, 3> seeds, double tol = 1e-12,
                  int max_iter = 100);

/// Seeds at z and z +- h.
RootResult muller(const ScalarFn& f, cplx z, cplx h, double tol = 1e-12, int max_iter = 100);

/// Same as muller but returns nullopt instead of throwing a numerical error.
std::optional<RootResult> try_muller(const ScalarFn& f, std::array<cplx, 3> seeds,
                                     double tol = 1e-12, int max_iter = 100);

/// f(z) / prod_i (z - roots[i])
ScalarFn deflate(ScalarFn f, std::vector<cplx> roots);

struct Circle {
  cplx center;
  double radius = 1;
};

struct BeynOptions {
  int quadrature_points = 64;
  int probe_columns = 4;
  /// Number of contour moments in the block Hankel pencil. With a 1x1
  /// family this is what lets more than one root be found.
  int moments = 1;
  double rank_tol = 1e-10;
  /// Compare against the half-resolution rule built from the even nodes and
  /// throw QuadratureSuspect if interior eigenvalues move by more than
  /// doubling_tol * radius.
  bool check_quadrature = true;
  double doubling_tol = 1e-6;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 1;
};

/// Contour-integral eigensolver: all z inside the circle with F(z)
/// singular. Throws RankOverflow or QuadratureSuspect.
std::vector<cplx> beyn(const MatrixFn& F, Circle contour, const BeynOptions& opts = {});

struct BoxSearchOptions {
  double tile = 0.5;         // target tile side before subdivision
  int quadrature_points = 64;
  int moments = 6;
  double tol = 1e-11;        // Muller tolerance, relative to the seed scale
  double dedupe = 1e-8;
  int max_depth = 4;
  unsigned threads = 1;
};

/// All roots of a scalar analytic f inside the box: Beyn on circles covering
/// the box (subdividing on RankOverflow) for seeds, then Muller.
std::vector<RootResult> box_roots(const ScalarFn& f, const ComplexBox& box,
                                  const BoxSearchOptions& opts = {});

}  // namespace cavishift::rootfind
