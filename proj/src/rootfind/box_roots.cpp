#include <algorithm>
#include <cmath>

#include "cavishift/errors.hpp"
#include "cavishift/rootfind.hpp"

namespace cavishift::rootfind {
namespace {

struct Tile {
  ComplexBox box;
  int depth;
};

void collect_seeds(const ScalarFn& f, const Tile& tile, const BoxSearchOptions& opts,
                   std::vector<cplx>& seeds) {
  const ComplexBox& b = tile.box;
  const cplx center{0.5 * (b.re_min + b.re_max), 0.5 * (b.im_min + b.im_max)};
  const double radius = 0.5 * std::hypot(b.re_max - b.re_min, b.im_max - b.im_min) * 1.05;
  BeynOptions bo;
  bo.quadrature_points = opts.quadrature_points;
  bo.probe_columns = 1;
  bo.moments = opts.moments;
  bo.rank_tol = 1e-11;
  bo.check_quadrature = false;
  bo.threads = opts.threads;
  const MatrixFn F = [&f](cplx z) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = f(z);
    return m;
  };
  try {
    const auto eigs = beyn(F, {center, radius}, bo);
    seeds.insert(seeds.end(), eigs.begin(), eigs.end());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RankOverflow || tile.depth >= opts.max_depth) throw;
    const double rm = 0.5 * (b.re_min + b.re_max);
    const double im = 0.5 * (b.im_min + b.im_max);
    const ComplexBox quads[4] = {{b.re_min, rm, b.im_min, im},
                                 {rm, b.re_max, b.im_min, im},
                                 {b.re_min, rm, im, b.im_max},
                                 {rm, b.re_max, im, b.im_max}};
    for (const auto& q : quads) collect_seeds(f, {q, tile.depth + 1}, opts, seeds);
  }
}

}  // namespace

std::vector<RootResult> box_roots(const ScalarFn& f, const ComplexBox& box,
                                  const BoxSearchOptions& opts) {
  if (!box.valid()) throw Error(ErrorKind::DomainError, "empty search box");
  const double w = box.re_max - box.re_min;
  const double h = box.im_max - box.im_min;
  const int nx = std::max(1, static_cast<int>(std::ceil(w / opts.tile)));
  const int ny = std::max(1, static_cast<int>(std::ceil(h / opts.tile)));
  std::vector<cplx> seeds;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const ComplexBox t{box.re_min + w * i / nx, box.re_min + w * (i + 1) / nx,
                         box.im_min + h * j / ny, box.im_min + h * (j + 1) / ny};
      collect_seeds(f, {t, 0}, opts, seeds);
    }

  const double step = 0.02 * std::min(w / nx, h / ny);
  std::vector<RootResult> roots;
  for (const cplx s : seeds) {
    auto r = try_muller(f, {s - step, s + step, s}, opts.tol, 100);
    if (!r || !box.contains(r->root)) continue;
    const bool dup = std::any_of(roots.begin(), roots.end(), [&](const RootResult& q) {
      return std::abs(q.root - r->root) < opts.dedupe * std::max(1.0, std::abs(r->root));
    });
    if (!dup) roots.push_back(*r);
  }
  std::sort(roots.begin(), roots.end(), [](const RootResult& a, const RootResult& b) {
    return a.root.real() < b.root.real() ||
           (a.root.real() == b.root.real() && a.root.imag() < b.root.imag());
  });
  return roots;
}

}  // namespace cavishift::rootfind
