#include <algorithm>
#include <random>
#include <string>

#include "cavishift/errors.hpp"
#include "cavishift/parallel.hpp"
#include "cavishift/rootfind.hpp"
#include "cavishift/simd.hpp"

namespace cavishift::rootfind {
namespace {

using Eigen::MatrixXcd;

struct NodeData {
  cplx zeta;        // e^{i theta_j}
  MatrixXcd solve;  // F(z_j)^{-1} V
};

// Eigenvalues (in the scaled variable) from the first `stride`-th nodes.
std::vector<cplx> pencil_eigs(const std::vector<NodeData>& nodes, int stride, int moments,
                              double threshold, int rows, int cols) {
  const int count = static_cast<int>(nodes.size()) / stride;
  const int np = 2 * moments;
  std::vector<MatrixXcd> a(np, MatrixXcd::Zero(rows, cols));
  for (int j = 0; j < count; ++j) {
    const NodeData& nd = nodes[static_cast<std::size_t>(j * stride)];
    cplx w = nd.zeta / static_cast<double>(count);
    for (int p = 0; p < np; ++p) {
      simd::complex_axpy(w, nd.solve.data(), a[p].data(), static_cast<std::size_t>(rows * cols));
      w *= nd.zeta;
    }
  }
  MatrixXcd h0(rows * moments, cols * moments), h1(rows * moments, cols * moments);
  for (int i = 0; i < moments; ++i)
    for (int j = 0; j < moments; ++j) {
      h0.block(i * rows, j * cols, rows, cols) = a[i + j];
      h1.block(i * rows, j * cols, rows, cols) = a[i + j + 1];
    }
  Eigen::JacobiSVD<MatrixXcd> svd(h0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv[rank] > threshold) ++rank;
  if (rank == 0) return {};
  if (rank == cols * moments)
    throw Error(ErrorKind::RankOverflow,
                "numerical rank " + std::to_string(rank) +
                    " equals probe_columns x moments; shrink the contour or add probes");
  const MatrixXcd u = svd.matrixU().leftCols(rank);
  const MatrixXcd w = svd.matrixV().leftCols(rank);
  const Eigen::VectorXcd sinv = sv.head(rank).cwiseInverse().cast<cplx>();
  const MatrixXcd b = u.adjoint() * h1 * w * sinv.asDiagonal();
  Eigen::ComplexEigenSolver<MatrixXcd> es(b, false);
  std::vector<cplx> out;
  for (int i = 0; i < rank; ++i) {
    const cplx l = es.eigenvalues()[i];
    if (std::abs(l) < 1.0) out.push_back(l);
  }
  return out;
}

}  // namespace

std::vector<cplx> beyn(const MatrixFn& F, Circle contour, const BeynOptions& opts) {
  if (opts.quadrature_points < 4 || opts.probe_columns < 1 || opts.moments < 1 ||
      !(contour.radius > 0.0))
    throw Error(ErrorKind::DomainError, "invalid Beyn parameters");
  const MatrixXcd f0 = F(contour.center + contour.radius);
  const int n = static_cast<int>(f0.rows());
  if (n == 0 || f0.cols() != n) throw Error(ErrorKind::DomainError, "F must be square");
  const int cols = std::min(opts.probe_columns, n);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  MatrixXcd v(n, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < n; ++i) v(i, j) = cplx(gauss(rng), gauss(rng));

  // Base rule has quadrature_points nodes; the check doubles it and the base
  // rule is the even-indexed subset.
  const int total = opts.check_quadrature ? 2 * opts.quadrature_points : opts.quadrature_points;
  std::vector<NodeData> nodes(static_cast<std::size_t>(total));
  parallel_for(nodes.size(), opts.threads, [&](std::size_t j) {
    const double theta = 2.0 * pi * static_cast<double>(j) / total;
    const cplx zeta = std::polar(1.0, theta);
    const cplx z = contour.center + contour.radius * zeta;
    const MatrixXcd fz = (j == 0) ? f0 : F(z);
    nodes[j] = {zeta, fz.partialPivLu().solve(v)};
  });
  double node_norm = 0.0;
  for (const auto& nd : nodes) node_norm = std::max(node_norm, nd.solve.norm());
  const double threshold = opts.rank_tol * node_norm;

  std::vector<cplx> fine = pencil_eigs(nodes, 1, opts.moments, threshold, n, cols);
  if (opts.check_quadrature) {
    const std::vector<cplx> coarse = pencil_eigs(nodes, 2, opts.moments, threshold, n, cols);
    for (const cplx l : fine) {
      if (std::abs(l) > 0.9) continue;
      double d = 1e300;
      for (const cplx c : coarse) d = std::min(d, std::abs(c - l));
      if (d > opts.doubling_tol)
        throw Error(ErrorKind::QuadratureSuspect,
                    "eigenvalue moved by " + std::to_string(d * contour.radius) +
                        " when halving the quadrature");
    }
  }
  std::vector<cplx> out;
  out.reserve(fine.size());
  for (const cplx l : fine) out.push_back(contour.center + contour.radius * l);
  return out;
}

}  // namespace cavishift::rootfind
