#include <doctest.h>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/specfun.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

using namespace cavishift;
using namespace cavishift::multipole;
using specfun::BesselKind;

namespace {

const cplx kW0 = ref::kDiskRoots[0].omega;

cplx wave(BesselKind kind, int n, cplx k, Point2 x, Point2 c) {
  const Point2 d = x - c;
  const cplx z = specfun::cyl_bessel(kind, std::abs(n), k * d.norm()).value;
  const double sign = n < 0 && (n % 2) ? -1.0 : 1.0;
  return sign * z * std::exp(I * static_cast<double>(n) * d.angle());
}

double smallest_singular(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().tail(1)(0) / svd.singularValues()(0);
}

}  // namespace

TEST_SUITE("multipole") {
  TEST_CASE("single-disk response matches the reference") {
    for (const auto& r : ref::kMie) {
      const cplx s = mie_coeff(r.rho, {r.eps_in, 1.0}, {r.eps_out, 1.0}, r.m, r.omega);
      CHECK(rel_err(s, r.s) < 1e-12);
      CHECK(rel_err(mie_coeff(r.rho, {r.eps_in, 1.0}, {r.eps_out, 1.0}, -r.m, r.omega), r.s) < 1e-12);
    }
    // Matched media scatter nothing.
    CHECK(std::abs(mie_coeff(0.3, {2.0, 1.0}, {2.0, 1.0}, 2, cplx{3.0, -0.5})) < 1e-15);
  }

  TEST_CASE("translation matrices reproduce the addition theorem") {
    const cplx k{4.0, -1.2};
    const Point2 from{0.0, 0.0}, to{1.2, 0.3};
    const int nmax = 4, trunc = 40;
    struct Case {
      Translation kind;
      BesselKind src, dst;
      Point2 x;
    };
    const Case cases[] = {
        {Translation::OutgoingToRegular, BesselKind::H1, BesselKind::J, {1.35, 0.1}},
        {Translation::OutgoingToOutgoing, BesselKind::H1, BesselKind::H1, {2.9, 1.8}},
        {Translation::RegularToRegular, BesselKind::J, BesselKind::J, {0.4, -0.7}},
    };
    for (const auto& c : cases) {
      const auto T = graf_translate(from, to, k, nmax, trunc, c.kind);
      for (int n = -nmax; n <= nmax; ++n) {
        cplx sum = 0;
        for (int m = -trunc; m <= trunc; ++m)
          sum += T(m + trunc, n + nmax) * wave(c.dst, m, k, c.x, to);
        const cplx direct = wave(c.src, n, k, c.x, from);
        INFO("kind=" << static_cast<int>(c.kind) << " n=" << n);
        CHECK(std::abs(sum - direct) < 1e-8 * std::max(1.0, std::abs(direct)));
      }
    }
  }

  TEST_CASE("validity regions") {
    const Point2 from{0.0, 0.0}, to{1.0, 0.0};
    CHECK_NOTHROW(check_validity(from, to, {1.5, 0.0}, Translation::OutgoingToRegular));
    try {
      check_validity(from, to, {2.5, 0.0}, Translation::OutgoingToRegular);
      FAIL("expected ValidityViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ValidityViolation);
    }
    CHECK_THROWS_AS(check_validity(from, to, {1.5, 0.0}, Translation::OutgoingToOutgoing), Error);
    CHECK_NOTHROW(check_validity(from, to, {9.0, 0.0}, Translation::RegularToRegular));
  }

  TEST_CASE("parity blocks carry the singularities of the full matrix") {
    TwoDiskGeometry g;
    g.cavity = {0.2, 1.0};
    g.L = 1.002;
    g.rho = 0.001;
    g.particle = {0.2, 1.0};
    const auto rep = two_disk_resonances(g, kW0, {.mode_order = 1});
    REQUIRE(rep.roots.size() == 2);
    TwoDiskSystem sys(g, 13, 6);
    for (const auto& r : rep.roots) {
      CHECK(smallest_singular(sys.matrix(r.result.root)) < 1e-9);
      CHECK(r.stability_shift < 1e-8);
    }
    CHECK(rep.roots[0].block != rep.roots[1].block);
  }

  TEST_CASE("an invisible particle leaves the disk resonance in place") {
    for (bool interior : {false, true}) {
      TwoDiskGeometry g;
      g.cavity = {0.2, 1.0};
      g.L = interior ? 0.5 : 1.4;
      g.rho = 0.05;
      g.particle = interior ? g.cavity : vacuum;
      const auto rep = two_disk_resonances(g, kW0, {.mode_order = 1});
      REQUIRE(rep.roots.size() == 2);
      for (const auto& r : rep.roots) CHECK(std::abs(r.result.root - kW0) < 1e-10);
    }
  }

  TEST_CASE("interior particle: oracle agrees with the asymptotic shift") {
    const auto mode = cavity2d::make_mode(1, 0.2, 1.0, 1.0, kW0);
    const double delta = 2e-3;
    cavity2d::ParticleScenario p;
    p.shape = cavity2d::DiskShape{1.0};
    p.center = {0.5, 0.0};
    p.delta = delta;
    p.material.eps_c = 2.0;
    p.material.mu_c = 1.5;
    p.placement = cavity2d::Placement::Interior;
    const auto pred = cavity2d::shift_matrix({mode, mode.partner()}, {p});

    TwoDiskGeometry g;
    g.cavity = {0.2, 1.0};
    g.L = 0.5;
    g.rho = delta;
    g.particle = {2.0, 1.5};
    const auto rep = two_disk_resonances(g, kW0, {.mode_order = 1});
    REQUIRE(rep.roots.size() == 2);
    for (const auto& r : rep.roots) {
      const cplx q = (r.result.root * r.result.root - kW0 * kW0) / (delta * delta);
      const double e = std::min(rel_err(q, pred.eta[0]), rel_err(q, pred.eta[1]));
      CHECK(e < 0.02);
    }
  }
}
