// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail=5,...] [--threads=N] [--only=3,4]
//
// Exit status is 0 when the set of failing criteria equals the expected-fail
// set, so a documented failure keeps ctest green but an unexpected pass or a
// new failure does not.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"
#include "cavishift/harness.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/polarization.hpp"
#include "cavishift/slab1d.hpp"
#include "cavishift/specfun.hpp"
#include "test_util.hpp"

using namespace cavishift;
namespace h = cavishift::harness;

namespace {

// Tolerances.
constexpr double kSlopeLo = 1.8, kSlopeHi = 2.2;
constexpr double kSlabRuntime = 1.0;  // s
constexpr double kRatioLo = 0.9, kRatioHi = 1.1;
constexpr double kOrderTol = 0.2;
constexpr double kDiskRuntime = 600.0;  // s
constexpr double kPositionTol = 0.25;
constexpr double kPeakTol = 0.3;
constexpr double kWronskianTol = 1e-10;
constexpr double kSphereTol = 1e-14;
constexpr double kPtDiskTol = 1e-8;
constexpr double kPtEllipseTol = 1e-6;
constexpr double kBlowUpTol = 0.05;
constexpr double kInvisibleTol = 1e-10;
constexpr double kStabilityTol = 1e-8;
constexpr double kSizeTol = 0.05;
constexpr int kCountTrialsNeeded = 95;

const std::vector<double> kDeltaGrid = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2};

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned g_threads = 1;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

h::json config(const std::string& name) {
  return h::load_config(std::string(CAVISHIFT_SOURCE_DIR) + "/configs/" + name);
}

// Shared by criteria 3 and 4.
const h::ResultTable& delta_grid_table() {
  static const h::ResultTable t = h::run(config("delta_grid.json"), "sweep", {g_threads});
  return t;
}
double g_delta_grid_seconds = 0;

const slab1d::SlabCavity kSlab{-1.0, 1.0, {4.0, 1.0}};
const Medium kSlabParticle{2.0, 1.0};

Outcome slab_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mode = slab1d::make_mode(kSlab, slab1d::closed_form_resonance(kSlab, 1));
  std::vector<double> err;
  for (double d : kDeltaGrid) {
    const slab1d::SlabParticle p{0.0, d, kSlabParticle};
    const cplx exact = slab1d::slab_perturbed_exact(kSlab, p, mode.omega0).root;
    err.push_back(std::abs(exact - (mode.omega0 + d * slab1d::slab_shift(mode, p))));
  }
  const double slope = loglog_slope(kDeltaGrid, err);
  const double secs = seconds_since(t0);
  return {slope >= kSlopeLo && slope <= kSlopeHi && secs < kSlabRuntime,
          "slope " + fmt("%.4f", slope) + ", " + fmt("%.3g", secs) + " s"};
}

Outcome slab_radiation_term() {
  const auto mode = slab1d::make_mode(kSlab, slab1d::closed_form_resonance(kSlab, 1));
  const slab1d::SlabParticle p{0.0, 1e-3, kSlabParticle};
  const cplx exact = slab1d::slab_perturbed_exact(kSlab, p, mode.omega0).root;
  const double full = std::abs(exact - (mode.omega0 + p.delta * slab1d::slab_shift(mode, p, true)));
  const double closed = std::abs(exact - (mode.omega0 + p.delta * slab1d::slab_shift(mode, p, false)));
  return {full < closed, "full " + fmt("%.3e", full) + " < closed " + fmt("%.3e", closed)};
}

Outcome disk_order() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& t = delta_grid_table();
  g_delta_grid_seconds = seconds_since(t0);
  bool pass = g_delta_grid_seconds < kDiskRuntime;
  std::ostringstream detail;
  for (int j = 1; j <= 2; ++j) {
    const std::string sj = std::to_string(j);
    std::vector<double> ds, shifts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      ds.push_back(t.number(i, "delta"));
      shifts.push_back(t.number(i, "shift_oracle_" + sj));
    }
    const double ratio = t.number(0, "shift_oracle_" + sj) / t.number(0, "shift_asym_" + sj);
    const double order = loglog_slope(ds, shifts);
    pass = pass && ds.front() == 1e-3 && ratio >= kRatioLo && ratio <= kRatioHi &&
           std::abs(order - 2.0) <= kOrderTol;
    detail << "branch " << j << ": ratio " << fmt("%.6f", ratio) << ", order " << fmt("%.4f", order)
           << "; ";
  }
  detail << fmt("%.3g", g_delta_grid_seconds) << " s";
  return {pass, detail.str()};
}

Outcome disk_convergence() {
  const auto& t = delta_grid_table();
  const cplx w0{t.number(0, "re_omega0"), t.number(0, "im_omega0")};
  bool pass = true;
  std::ostringstream detail;
  for (int j = 1; j <= 2; ++j) {
    const std::string sj = std::to_string(j);
    double prev = -1;
    // Rows are in increasing delta, so distances must increase strictly.
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const cplx w{t.number(i, "re_omega_oracle_" + sj), t.number(i, "im_omega_oracle_" + sj)};
      const double dist = std::abs(w - w0);
      if (!std::isfinite(dist) || dist <= prev) pass = false;
      prev = dist;
    }
    detail << "branch " << j << " |w-w0| at delta=5e-2: " << fmt("%.3e", prev) << "; ";
  }
  return {pass, detail.str()};
}

Outcome position_sweep() {
  const auto t = h::run(config("position.json"), "sweep", {g_threads});
  bool agree = true, monotone = true;
  double worst = 0;
  std::vector<double> last(3, INFINITY);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double z = t.number(i, "z");
    for (int j = 1; j <= 2; ++j) {
      const std::string sj = std::to_string(j);
      if (z <= 2.0 + 1e-12) {
        const double e = std::abs(t.number(i, "rel_err_" + sj));
        worst = std::max(worst, std::isfinite(e) ? e : INFINITY);
        if (!(e <= kPositionTol)) agree = false;
      }
      if (z <= 3.0 + 1e-12) {
        const double s = t.number(i, "shift_asym_" + sj);
        if (!(s < last[j])) monotone = false;
        last[j] = s;
      }
    }
  }
  return {agree && monotone, "worst rel err on [1.2,2] " + fmt("%.3f", worst) +
                                 (monotone ? ", predicted decreasing" : ", predicted not decreasing")};
}

Outcome plasmonic_peak() {
  const auto t = h::run(config("contrast.json"), "sweep", {g_threads});
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.number(i, "peak") == 1) {
      const double eps = t.number(i, "eps_c");
      return {std::abs(eps + 1.0) < kPeakTol, "eps_c* = " + fmt("%.4f", eps)};
    }
  return {false, "no peak row"};
}

Outcome special_functions() {
  double worst = 0;
  for (int n = 0; n <= 60; n += 3)
    for (double x = -100; x <= 100; x += 2.5)
      for (double y = -18.75; y <= 18.75; y += 2.5) {
        const cplx z{x + 0.3, y};
        if (std::abs(z) > 100) continue;
        const auto j = specfun::cyl_bessel(specfun::BesselKind::J, n, z);
        const auto yv = specfun::cyl_bessel(specfun::BesselKind::Y, n, z);
        const cplx w = j.value * yv.derivative - j.derivative * yv.value;
        const cplx expect = 2.0 / (pi * z);
        const double scale = std::max(
            std::abs(expect), std::abs(j.value * yv.derivative) + std::abs(j.derivative * yv.value));
        worst = std::max(worst, std::abs(w - expect) / scale);
      }
  double sphere = 0;
  for (double r : {0.5, 1.0, 2.0})
    for (cplx w : {cplx{0.7, -0.1}, cplx{3.0, -0.8}, cplx{12.0, -2.0}}) {
      const cplx z0 = cavity2d::capacity_coeff(3, 0, w, r).z;
      const cplx expect = I * w - 1.0 / r;
      sphere = std::max(sphere, std::abs(z0 - expect) / std::abs(expect));
    }
  return {worst < kWronskianTol && sphere < kSphereTol,
          "Wronskian " + fmt("%.2e", worst) + ", d=3 z0 " + fmt("%.2e", sphere)};
}

Outcome polarization_tensors() {
  using namespace polarization;
  double disk = 0, ell = 0;
  for (cplx k : {cplx{3.0, 0.0}, cplx{0.2, 0.0}, cplx{-3.0, 0.5}, cplx{5.0, 2.0}}) {
    const auto num = pt_numeric(make_disk(0.7, 256), k).matrix;
    const auto ref = pt_disk(k, 0.7).matrix;
    disk = std::max(disk, (num - ref).norm() / ref.norm());
    const auto enum_ = pt_numeric(make_ellipse(1.5, 0.6, 0.4, 256), k).matrix;
    const auto eref = pt_ellipse(k, 1.5, 0.6, 0.4).matrix;
    ell = std::max(ell, (enum_ - eref).norm() / eref.norm());
  }
  const NeumannPoincare op(make_disk(1.0, 256));
  double lo = INFINITY, hi = 0;
  for (double e : {0.02, 0.01, 1e-3, 1e-4})
    for (double sign : {-1.0, 1.0}) {
      const cplx k = -1.0 + sign * e;
      const double prod = op.polarization(k).matrix.norm() * std::abs(k + 1.0);
      lo = std::min(lo, prod);
      hi = std::max(hi, prod);
    }
  const double spread = hi / lo - 1.0;
  return {disk < kPtDiskTol && ell < kPtEllipseTol && spread < kBlowUpTol,
          "disk " + fmt("%.2e", disk) + ", ellipse " + fmt("%.2e", ell) + ", blow-up spread " +
              fmt("%.3f", spread)};
}

Outcome oracle_consistency() {
  const cplx eps{0.2, 0.0};
  const auto modes = cavity2d::disk_modes(1, eps, 1.0, 1.0, {3.0, 6.0, -2.0, -0.5});
  if (modes.modes.size() != 1) return {false, "disk_modes did not return one m=1 mode"};
  const cplx w0 = modes.modes.front().omega0;
  const Medium cavity{eps, 1.0};
  double worst = 0, worst_stab = 0;
  bool pass = true;
  auto check_stability = [&](const multipole::OracleReport& rep) {
    for (const auto& r : rep.roots) {
      worst_stab = std::max(worst_stab, r.stability_shift);
      if (!(r.stability_shift < kStabilityTol)) pass = false;
    }
  };
  for (bool interior : {false, true}) {
    multipole::TwoDiskGeometry g;
    g.cavity = cavity;
    g.L = interior ? 0.5 : 1.4;
    g.rho = 0.05;
    g.particle = interior ? cavity : vacuum;
    const auto rep = multipole::two_disk_resonances(g, w0, {.mode_order = 1});
    if (rep.roots.size() != 2) pass = false;
    for (const auto& r : rep.roots) worst = std::max(worst, std::abs(r.result.root - w0));
    check_stability(rep);
  }
  multipole::TwoDiskGeometry g;
  g.cavity = cavity;
  g.L = 1.002;
  g.rho = 1e-3;
  g.particle = cavity;
  const auto perturbed = multipole::two_disk_resonances(g, w0, {.mode_order = 1});
  if (perturbed.roots.empty()) pass = false;
  check_stability(perturbed);
  return {pass && worst < kInvisibleTol,
          "invisible |w-w0| " + fmt("%.2e", worst) + ", worst stability shift " +
              fmt("%.2e", worst_stab)};
}

Outcome inversions() {
  const auto size = h::run(config("invert_size.json"), "invert-size", {g_threads});
  double worst_size = 0;
  for (std::size_t i = 0; i < size.rows.size(); ++i) {
    const double e = std::abs(size.number(i, "rel_err"));
    worst_size = std::max(worst_size, std::isfinite(e) ? e : INFINITY);
  }

  auto cfg = config("invert_count.json");
  cfg["invert_count"]["n_true"] = {1, 2, 3, 4, 5};
  cfg["invert_count"]["noise"] = 0.0;
  cfg["invert_count"]["trials"] = 1;
  const auto exact = h::run(cfg, "invert-count", {g_threads});
  int exact_ok = 0;
  for (std::size_t i = 0; i < exact.rows.size(); ++i)
    exact_ok += exact.number(i, "n_hat") == exact.number(i, "n_true");

  const auto noisy = h::run(config("invert_count.json"), "invert-count", {g_threads});
  int noisy_ok = 0;
  for (std::size_t i = 0; i < noisy.rows.size(); ++i)
    noisy_ok += noisy.number(i, "n_hat") == 4 && noisy.number(i, "n_true") == 4;

  const bool pass = !size.rows.empty() && worst_size < kSizeTol && exact_ok == 5 &&
                    exact.rows.size() == 5 && noisy.rows.size() == 100 &&
                    noisy_ok >= kCountTrialsNeeded;
  return {pass, "size rel err " + fmt("%.4f", worst_size) + ", count exact " +
                    std::to_string(exact_ok) + "/5, noisy " + std::to_string(noisy_ok) + "/100"};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail, only;
  g_threads = std::max(1u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--expect-fail=", 0) == 0) expect_fail = parse_list(a.substr(14));
    else if (a.rfind("--only=", 0) == 0) only = parse_list(a.substr(7));
    else if (a.rfind("--threads=", 0) == 0) g_threads = static_cast<unsigned>(std::stoul(a.substr(10)));
    else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail=N,...] [--only=N,...] [--threads=N]\n");
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1D first-order consistency", slab_consistency},
      {"1D radiation term", slab_radiation_term},
      {"2D convergence order", disk_order},
      {"2D monotone convergence", disk_convergence},
      {"position sweep", position_sweep},
      {"plasmonic peak", plasmonic_peak},
      {"special functions", special_functions},
      {"polarization tensors", polarization_tensors},
      {"oracle self-consistency", oracle_consistency},
      {"inversions", inversions},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) failed.insert(id);
    std::printf("criterion %2d %-4s %-28s %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }

  std::set<int> expected;
  for (int id : expect_fail)
    if (only.empty() || only.count(id)) expected.insert(id);
  for (int id : failed)
    if (!expected.count(id)) std::printf("unexpected failure: criterion %d\n", id);
  for (int id : expected)
    if (!failed.count(id)) std::printf("expected failure now passes: criterion %d\n", id);
  return failed == expected ? 0 : 1;
}
