#include <doctest.h>

#include <algorithm>

#include "cavishift/errors.hpp"
#include "cavishift/rootfind.hpp"
#include "test_util.hpp"

using namespace cavishift;
using namespace cavishift::rootfind;

namespace {

bool contains_near(const std::vector<cplx>& v, cplx z, double tol) {
  return std::any_of(v.begin(), v.end(), [&](cplx w) { return std::abs(w - z) < tol; });
}

}  // namespace

TEST_SUITE("rootfind") {
  TEST_CASE("Muller finds a complex root of a polynomial") {
    const cplx r{1.5, -0.75};
    const ScalarFn f = [&](cplx z) { return (z - r) * (z * z + 4.0); };
    const auto res = muller(f, cplx{1.0, -0.5}, 0.1);
    CHECK(res.converged);
    CHECK(std::abs(res.root - r) < 1e-13);
    CHECK(res.residual <= 1e-12);
  }

  TEST_CASE("Muller on a transcendental function") {
    const ScalarFn f = [](cplx z) { return std::exp(z) - 2.0; };
    const auto res = muller(f, cplx{0.5, 0.2}, 0.1);
    CHECK(std::abs(res.root - std::log(2.0)) < 1e-13);
  }

  TEST_CASE("Muller failures") {
    const ScalarFn none = [](cplx z) { return std::exp(z); };
    CHECK_THROWS_AS(muller(none, cplx{0.0, 0.0}, 0.1, 1e-12, 20), Error);
    CHECK_FALSE(try_muller(none, {cplx{-1.0}, cplx{0.0}, cplx{1.0}}, 1e-12, 20).has_value());
    const ScalarFn any = [](cplx z) { return z - 1.0; };
    try {
      muller(any, {cplx{0.0}, cplx{0.0}, cplx{1.0}});
      FAIL("expected DomainError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DomainError);
    }
    const ScalarFn flat = [](cplx) { return cplx{1.0}; };
    try {
      muller(flat, cplx{0.0}, 0.1);
      FAIL("expected DegenerateStep");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateStep);
    }
  }

  TEST_CASE("deflation removes known roots") {
    const ScalarFn f = [](cplx z) { return (z - 1.0) * (z - 1.2); };
    const auto g = deflate(f, {cplx{1.0}});
    const auto res = muller(g, cplx{0.9}, 0.05);
    CHECK(std::abs(res.root - 1.2) < 1e-12);
  }

  TEST_CASE("Beyn recovers eigenvalues of a diagonal family inside the circle") {
    const std::vector<cplx> eig{{0.2, 0.1}, {-0.3, -0.4}, {0.5, 0.0}, {2.0, 0.0}};
    const MatrixFn F = [&](cplx z) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
      for (int i = 0; i < 4; ++i) m(i, i) = z - eig[i];
      m(4, 4) = 1.0;
      m(5, 5) = std::exp(z);
      return m;
    };
    const auto found = beyn(F, {cplx{0.0}, 1.0});
    CHECK(found.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(contains_near(found, eig[i], 1e-8));
  }

  TEST_CASE("Beyn with moments finds several roots of a scalar function") {
    const ScalarFn f = [](cplx z) { return std::sin(z) * (z - cplx{0.5, 0.5}); };
    BeynOptions o;
    o.probe_columns = 1;
    o.moments = 4;
    const auto found = beyn([&](cplx z) { return Eigen::MatrixXcd::Constant(1, 1, f(z)); },
                            {cplx{0.0}, 1.0}, o);
    CHECK(found.size() == 2);
    CHECK(contains_near(found, 0.0, 1e-8));
    CHECK(contains_near(found, cplx{0.5, 0.5}, 1e-8));
  }

  TEST_CASE("Beyn rank overflow") {
    // Not a bare polynomial: for those the low moments of 1/f cancel.
    const ScalarFn f = [](cplx z) { return std::exp(z) * (z - 0.1) * (z + 0.1) * (z - cplx{0.0, 0.3}); };
    BeynOptions o;
    o.probe_columns = 1;
    o.moments = 2;
    try {
      beyn([&](cplx z) { return Eigen::MatrixXcd::Constant(1, 1, f(z)); }, {cplx{0.0}, 1.0}, o);
      FAIL("expected RankOverflow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankOverflow);
    }
  }

  TEST_CASE("box search finds every zero of sin in a box") {
    const ScalarFn f = [](cplx z) { return std::sin(z); };
    const auto roots = box_roots(f, {0.5, 10.0, -1.0, 1.0});
    std::vector<cplx> r;
    for (const auto& x : roots) r.push_back(x.root);
    CHECK(r.size() == 3);
    for (int k = 1; k <= 3; ++k) CHECK(contains_near(r, k * pi, 1e-10));
  }
}
