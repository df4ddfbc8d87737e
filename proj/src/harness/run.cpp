#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "cavishift/errors.hpp"
#include "cavishift/parallel.hpp"
#include "cavishift/polarization.hpp"
#include "cavishift/simd.hpp"
#include "cavishift/specfun.hpp"
#include "scenario.hpp"

namespace cavishift::harness {
namespace {

using detail::CavityType;
using detail::Node;
using detail::Scenario;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- modes

slab1d::SlabCavity slab_of(const Scenario& s) {
  return {s.cavity.a, s.cavity.b, s.cavity.medium};
}

slab1d::SlabMode resolve_slab_mode(const Scenario& s) {
  const auto cav = slab_of(s);
  if (s.mode.omega0) {
    const auto r = rootfind::muller(
        [&](cplx w) { return slab1d::transfer_residual({{cav.medium, cav.length()}}, w); },
        *s.mode.omega0, 1e-3);
    return slab1d::make_mode(cav, r.root);
  }
  const auto modes = slab1d::slab_resonances(cav, *s.mode.search);
  if (static_cast<std::size_t>(s.mode.index) >= modes.size())
    throw Error(ErrorKind::ConfigError, "mode.index: only " + std::to_string(modes.size()) +
                                            " resonances in the search box");
  return modes[s.mode.index];
}

cavity2d::DiskMode resolve_disk_mode(const detail::CavitySpec& c, const detail::ModeSpec& m) {
  if (m.omega0) {
    const auto r = rootfind::muller(
        [&](cplx w) { return cavity2d::dispersion(m.m, c.medium.eps, c.medium.mu, c.R, w); },
        *m.omega0, 1e-3);
    return cavity2d::make_mode(m.m, c.medium.eps, c.medium.mu, c.R, r.root);
  }
  const auto found = cavity2d::disk_modes(m.m, c.medium.eps, c.medium.mu, c.R, *m.search);
  if (static_cast<std::size_t>(m.index) >= found.modes.size())
    throw Error(ErrorKind::ConfigError, "mode.index: only " + std::to_string(found.modes.size()) +
                                            " modes in the search box");
  return found.modes[m.index];
}

std::vector<cavity2d::DiskMode> mode_pair(const cavity2d::DiskMode& mode) {
  if (mode.m == 0) return {mode};
  return {mode, mode.partner()};
}

void add_oracle_provenance(ResultTable& t, const multipole::OracleOptions& o) {
  t.provenance.emplace_back("oracle_n1", std::to_string(o.n1 >= 0 ? o.n1 : o.mode_order + 12));
  t.provenance.emplace_back("oracle_n2", std::to_string(o.n2));
  t.provenance.emplace_back("oracle_radius", num(o.radius));
  t.provenance.emplace_back("oracle_quadrature_points", std::to_string(o.quadrature_points));
  t.provenance.emplace_back("oracle_tol", num(o.tol));
  t.provenance.emplace_back("oracle_stability_tol", num(o.stability_tol));
}

ResultTable task_modes(const Scenario& s) {
  ResultTable t;
  if (s.cavity.type == CavityType::Slab) {
    if (!s.mode.search) throw Error(ErrorKind::ConfigError, "mode.search: missing");
    const auto cav = slab_of(s);
    t.columns = {"index", "re_omega0", "im_omega0", "residual"};
    long long i = 0;
    for (const auto& m : slab1d::slab_resonances(cav, *s.mode.search))
      t.rows.push_back({i++, m.omega0.real(), m.omega0.imag(),
                        std::abs(slab1d::transfer_residual({{cav.medium, cav.length()}}, m.omega0))});
    return t;
  }
  if (!s.mode.search) throw Error(ErrorKind::ConfigError, "mode.search: missing");
  const auto& c = s.cavity;
  const auto found = cavity2d::disk_modes(s.mode.m, c.medium.eps, c.medium.mu, c.R, *s.mode.search);
  t.columns = {"m", "re_omega0", "im_omega0", "residual", "re_c", "im_c", "spurious"};
  for (const auto& m : found.modes)
    t.rows.push_back({static_cast<long long>(m.m), m.omega0.real(), m.omega0.imag(),
                      std::abs(cavity2d::dispersion(m.m, c.medium.eps, c.medium.mu, c.R, m.omega0)),
                      m.c.real(), m.c.imag(), 0LL});
  for (const cplx w : found.spurious)
    t.rows.push_back({static_cast<long long>(s.mode.m), w.real(), w.imag(), kNaN, kNaN, kNaN, 1LL});
  return t;
}

// ---------------------------------------------------------------- shift / oracle

std::vector<cavity2d::ParticleScenario> particles_2d(const Scenario& s, std::optional<double> delta,
                                                     std::optional<double> z = std::nullopt,
                                                     std::optional<cplx> eps_c = std::nullopt) {
  std::vector<cavity2d::ParticleScenario> out;
  for (const auto& p : s.particles) {
    auto ps = detail::materialize(p, s.cavity.R, delta ? *delta : p.delta, z);
    if (eps_c) ps.material.eps_c = *eps_c;
    out.push_back(ps);
  }
  return out;
}

slab1d::SlabParticle slab_particle(const Scenario& s, std::optional<double> delta = std::nullopt) {
  const auto& p = s.particles.front();
  return {p.x0, delta ? *delta : p.delta, p.material};
}

ResultTable task_shift(const Scenario& s) {
  ResultTable t;
  if (s.cavity.type == CavityType::Slab) {
    const auto mode = resolve_slab_mode(s);
    const auto p = slab_particle(s);
    const cplx w1 = slab1d::slab_shift(mode, p, true);
    const cplx w1n = slab1d::slab_shift(mode, p, false);
    const cplx pred = mode.omega0 + p.delta * w1;
    t.columns = {"re_omega0", "im_omega0", "re_omega1", "im_omega1", "re_omega1_closed",
                 "im_omega1_closed", "re_omega_pred", "im_omega_pred"};
    t.rows.push_back({mode.omega0.real(), mode.omega0.imag(), w1.real(), w1.imag(), w1n.real(),
                      w1n.imag(), pred.real(), pred.imag()});
    return t;
  }
  const auto mode = resolve_disk_mode(s.cavity, s.mode);
  const auto pred = cavity2d::shift_matrix(mode_pair(mode), particles_2d(s, std::nullopt));
  t.columns = {"branch", "re_eta", "im_eta", "re_omega", "im_omega", "shift"};
  for (std::size_t j = 0; j < pred.eta.size(); ++j) {
    const cplx w = pred.omega_pred[j];
    t.rows.push_back({static_cast<long long>(j + 1), pred.eta[j].real(), pred.eta[j].imag(),
                      w.real(), w.imag(), std::abs(w * w - mode.omega0 * mode.omega0)});
  }
  t.provenance.emplace_back("re_omega0", num(mode.omega0.real()));
  t.provenance.emplace_back("im_omega0", num(mode.omega0.imag()));
  return t;
}

multipole::TwoDiskGeometry oracle_geometry(const Scenario& s,
                                           const cavity2d::ParticleScenario& p) {
  if (s.particles.size() != 1)
    throw Error(ErrorKind::ConfigError, "particles: the oracle handles exactly one particle");
  const auto* disk = std::get_if<cavity2d::DiskShape>(&p.shape);
  if (!disk) throw Error(ErrorKind::ConfigError, "particles[0].shape: the oracle needs a disk");
  multipole::TwoDiskGeometry g;
  g.R = s.cavity.R;
  g.cavity = s.cavity.medium;
  // The cavity is rotation invariant, so only the center distance matters.
  g.L = p.center.norm();
  g.rho = p.delta * disk->radius;
  g.particle = {p.material.eps_c, p.material.mu_c};
  return g;
}

std::string block_name(multipole::Block b) {
  switch (b) {
    case multipole::Block::Even: return "even";
    case multipole::Block::Odd: return "odd";
    default: return "full";
  }
}

ResultTable task_oracle(const Scenario& s) {
  ResultTable t;
  if (s.cavity.type == CavityType::Slab) {
    const auto mode = resolve_slab_mode(s);
    const auto r = slab1d::slab_perturbed_exact(slab_of(s), slab_particle(s), mode.omega0);
    t.columns = {"re_omega0", "im_omega0", "re_omega", "im_omega", "residual", "iterations"};
    t.rows.push_back({mode.omega0.real(), mode.omega0.imag(), r.root.real(), r.root.imag(),
                      r.residual, static_cast<long long>(r.iterations)});
    return t;
  }
  const auto mode = resolve_disk_mode(s.cavity, s.mode);
  const auto ps = particles_2d(s, std::nullopt);
  const auto rep = multipole::two_disk_resonances(oracle_geometry(s, ps.front()), mode.omega0, s.oracle);
  t.columns = {"block", "re_omega", "im_omega", "residual", "stability_shift", "status"};
  for (const auto& r : rep.roots)
    t.rows.push_back({block_name(r.block), r.result.root.real(), r.result.root.imag(),
                      r.result.residual, r.stability_shift, std::string("accepted")});
  for (const auto& r : rep.unstable)
    t.rows.push_back({block_name(r.block), r.result.root.real(), r.result.root.imag(),
                      r.result.residual, r.stability_shift, std::string("UnstableRoot")});
  for (const cplx w : rep.spurious)
    t.rows.push_back({std::string("-"), w.real(), w.imag(), kNaN, kNaN, std::string("SpuriousRoot")});
  t.provenance.emplace_back("re_omega0", num(mode.omega0.real()));
  t.provenance.emplace_back("im_omega0", num(mode.omega0.imag()));
  add_oracle_provenance(t, s.oracle);
  return t;
}

// ---------------------------------------------------------------- sweeps

/// Assigns distinct oracle roots to the predicted branches, minimizing the
/// summed distance. Unassigned branches get NaN.
std::vector<cplx> matched_oracle(const std::vector<cplx>& predicted, const std::vector<cplx>& found) {
  std::vector<cplx> out(predicted.size(), cplx{kNaN, kNaN});
  if (found.empty()) return out;
  if (predicted.size() == 1 || found.size() == 1) {
    std::size_t bp = 0, bf = 0;
    for (std::size_t j = 0; j < predicted.size(); ++j)
      for (std::size_t f = 0; f < found.size(); ++f)
        if (std::abs(predicted[j] - found[f]) < std::abs(predicted[bp] - found[bf])) {
          bp = j;
          bf = f;
        }
    out[bp] = found[bf];
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < found.size(); ++a)
    for (std::size_t b = 0; b < found.size(); ++b) {
      if (a == b) continue;
      const double d = std::abs(predicted[0] - found[a]) + std::abs(predicted[1] - found[b]);
      if (d < best) {
        best = d;
        out = {found[a], found[b]};
      }
    }
  return out;
}

// The contour must enclose the predicted roots; its node count grows with
// the radius so the node spacing stays fixed.
constexpr double kMaxOracleRadius = 1.0;
constexpr int kMaxOracleNodes = 192;

multipole::OracleOptions oracle_for(const multipole::OracleOptions& base, cplx omega0,
                                    const std::vector<cplx>& predicted) {
  multipole::OracleOptions o = base;
  double reach = 0;
  for (const cplx w : predicted)
    if (std::isfinite(w.real())) reach = std::max(reach, std::abs(w - omega0));
  const double r = std::min(1.5 * reach, kMaxOracleRadius);
  if (r > o.radius) {
    o.quadrature_points = std::min(
        kMaxOracleNodes, static_cast<int>(std::ceil(base.quadrature_points * r / base.radius)));
    o.radius = r;
  }
  return o;
}

struct DiskRow {
  std::vector<cavity2d::ParticleScenario> particles;
  std::vector<cplx> predicted;
  std::vector<cplx> oracle;
  std::vector<double> shift_asym;
  std::vector<double> shift_oracle;
  std::string status = "ok";
};

DiskRow disk_row(const Scenario& s, const cavity2d::DiskMode& mode, std::optional<double> delta,
                 std::optional<double> z, std::optional<cplx> eps_c) {
  DiskRow row;
  const auto modes = mode_pair(mode);
  const cplx w0sq = mode.omega0 * mode.omega0;
  row.shift_asym.assign(modes.size(), kNaN);
  row.shift_oracle.assign(modes.size(), kNaN);
  row.oracle.assign(modes.size(), cplx{kNaN, kNaN});
  row.predicted.assign(modes.size(), cplx{kNaN, kNaN});
  row.particles = particles_2d(s, delta, z, eps_c);
  try {
    const auto pred = cavity2d::shift_matrix(modes, row.particles);
    for (std::size_t j = 0; j < modes.size(); ++j) {
      row.predicted[j] = pred.omega_pred[j];
      row.shift_asym[j] = std::abs(pred.omega_pred[j] * pred.omega_pred[j] - w0sq);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainError) throw;
    row.status = std::string(e.name());
  }
  return row;
}

/// Fills the oracle columns; roots are assigned to branches by proximity to
/// `reference` (the prediction, or the previous row when tracking).
void oracle_row(DiskRow& row, const Scenario& s, const cavity2d::DiskMode& mode,
                const std::vector<cplx>& reference) {
  const cplx w0sq = mode.omega0 * mode.omega0;
  std::vector<cplx> ref = reference;
  for (std::size_t j = 0; j < ref.size(); ++j)
    if (!std::isfinite(ref[j].real())) ref[j] = std::isfinite(row.predicted[j].real()) ? row.predicted[j] : mode.omega0;
  try {
    const auto rep = multipole::two_disk_resonances(oracle_geometry(s, row.particles.front()),
                                                    mode.omega0, oracle_for(s.oracle, mode.omega0, ref));
    std::vector<cplx> found;
    for (const auto& r : rep.roots) found.push_back(r.result.root);
    row.oracle = matched_oracle(ref, found);
    for (std::size_t j = 0; j < row.oracle.size(); ++j)
      if (!std::isnan(row.oracle[j].real()))
        row.shift_oracle[j] = std::abs(row.oracle[j] * row.oracle[j] - w0sq);
    if (found.size() < row.oracle.size() && row.status == "ok")
      row.status = rep.unstable.empty() ? "NoConvergence" : "UnstableRoot";
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    if (row.status == "ok") row.status = std::string(e.name());
  }
}

double rel_err(double asym, double oracle) { return (asym - oracle) / oracle; }

ResultTable sweep_slab(const Scenario& s, const RunOptions& opts) {
  const auto& sw = *s.sweep;
  if (sw.parameter != "delta")
    throw Error(ErrorKind::ConfigError, "sweep.parameter: slab sweeps support only \"delta\"");
  const auto mode = resolve_slab_mode(s);
  const auto cav = slab_of(s);
  ResultTable t;
  t.columns = {"delta", "re_omega0", "im_omega0", "shift_asym", "shift_oracle", "rel_err",
               "err_full", "err_closed"};
  t.rows.resize(sw.values.size());
  parallel_for(sw.values.size(), opts.threads, [&](std::size_t i) {
    const double d = sw.values[i];
    const auto p = slab_particle(s, d);
    const cplx full = mode.omega0 + d * slab1d::slab_shift(mode, p, true);
    const cplx closed = mode.omega0 + d * slab1d::slab_shift(mode, p, false);
    const double asym = std::abs(full - mode.omega0);
    double exact_shift = kNaN, ef = kNaN, ec = kNaN;
    if (sw.oracle) {
      const cplx w = slab1d::slab_perturbed_exact(cav, p, mode.omega0).root;
      exact_shift = std::abs(w - mode.omega0);
      ef = std::abs(w - full);
      ec = std::abs(w - closed);
    }
    t.rows[i] = {d, mode.omega0.real(), mode.omega0.imag(), asym, exact_shift,
                 rel_err(asym, exact_shift), ef, ec};
  });
  return t;
}

ResultTable sweep_disk(const Scenario& s, const RunOptions& opts) {
  const auto& sw = *s.sweep;
  const auto mode = resolve_disk_mode(s.cavity, s.mode);
  const std::size_t nb = mode.m == 0 ? 1 : 2;
  const bool by_eps = sw.parameter == "eps_c" || sw.parameter == "inv_eps_c";
  if (!by_eps && sw.parameter != "delta" && sw.parameter != "z")
    throw Error(ErrorKind::ConfigError,
                "sweep.parameter: expected delta, z, eps_c or inv_eps_c, got \"" + sw.parameter + "\"");
  if (sw.oracle) (void)oracle_geometry(s, particles_2d(s, std::nullopt).front());

  ResultTable t;
  if (by_eps) t.columns = {"eps_c", "inv_eps_c"};
  else t.columns = {sw.parameter == "delta" ? "delta" : "z", "re_omega0", "im_omega0"};
  for (std::size_t j = 1; j <= nb; ++j) t.columns.push_back("shift_asym_" + std::to_string(j));
  if (sw.oracle || !by_eps) {
    for (std::size_t j = 1; j <= nb; ++j) t.columns.push_back("shift_oracle_" + std::to_string(j));
    for (std::size_t j = 1; j <= nb; ++j) t.columns.push_back("rel_err_" + std::to_string(j));
  }
  if (sw.oracle && !by_eps)
    for (std::size_t j = 1; j <= nb; ++j) {
      t.columns.push_back("re_omega_oracle_" + std::to_string(j));
      t.columns.push_back("im_omega_oracle_" + std::to_string(j));
    }
  if (by_eps) t.columns.insert(t.columns.end(), {"status", "peak"});

  std::vector<DiskRow> rows(sw.values.size());
  parallel_for(sw.values.size(), opts.threads, [&](std::size_t i) {
    const double v = sw.values[i];
    std::optional<double> delta, z;
    std::optional<cplx> eps;
    if (sw.parameter == "delta") delta = v;
    else if (sw.parameter == "z") z = v;
    else if (sw.parameter == "eps_c") eps = v;
    else {
      if (v == 0.0) throw Error(ErrorKind::ConfigError, "sweep.values: 1/eps_c = 0 is not a material");
      eps = 1.0 / v;
    }
    rows[i] = disk_row(s, mode, delta, z, eps);
  });
  if (sw.oracle && sw.track) {
    // Continuation: each row's roots are matched against the previous row's.
    for (std::size_t i = 0; i < rows.size(); ++i)
      oracle_row(rows[i], s, mode, i == 0 ? rows[i].predicted : rows[i - 1].oracle);
  } else if (sw.oracle) {
    parallel_for(rows.size(), opts.threads,
                 [&](std::size_t i) { oracle_row(rows[i], s, mode, rows[i].predicted); });
  }

  std::size_t peak = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::isfinite(rows[i].shift_asym[0]) &&
        (peak == rows.size() || rows[i].shift_asym[0] > rows[peak].shift_asym[0]))
      peak = i;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double v = sw.values[i];
    std::vector<Cell> r;
    if (by_eps) {
      const double eps = sw.parameter == "eps_c" ? v : 1.0 / v;
      r = {eps, 1.0 / eps};
    } else {
      r = {v, mode.omega0.real(), mode.omega0.imag()};
    }
    for (double a : rows[i].shift_asym) r.push_back(a);
    if (sw.oracle || !by_eps) {
      for (double o : rows[i].shift_oracle) r.push_back(o);
      for (std::size_t j = 0; j < nb; ++j)
        r.push_back(rel_err(rows[i].shift_asym[j], rows[i].shift_oracle[j]));
    }
    if (sw.oracle && !by_eps)
      for (const cplx w : rows[i].oracle) {
        r.push_back(w.real());
        r.push_back(w.imag());
      }
    if (by_eps) {
      r.push_back(rows[i].status);
      r.push_back(static_cast<long long>(i == peak));
    }
    t.rows.push_back(std::move(r));
  }
  t.provenance.emplace_back("mode_m", std::to_string(mode.m));
  if (sw.oracle) {
    add_oracle_provenance(t, s.oracle);
    t.provenance.emplace_back("oracle_branch_matching", sw.track ? "continuation" : "prediction");
    t.provenance.emplace_back("oracle_radius_rule",
                              "max(oracle_radius, min(1.5 max|w_pred - w0|, 1)), nodes scaled with radius");
  }
  return t;
}

ResultTable task_sweep(const Scenario& s, const RunOptions& opts) {
  if (!s.sweep) throw Error(ErrorKind::ConfigError, "sweep: missing");
  return s.cavity.type == CavityType::Slab ? sweep_slab(s, opts) : sweep_disk(s, opts);
}

// ---------------------------------------------------------------- pt

ResultTable task_pt(const Node& root) {
  const Node pt = root.at("pt");
  std::string type;
  const detail::ParticleSpec spec = detail::parse_particle(
      Node(json{{"shape", pt.at("shape").raw()}}, pt.path()), CavityType::Disk);
  type = spec.shape_type;
  const bool numeric = pt.boolean("numeric", type == "kite" || type == "curve");
  const int samples = pt.integer("samples", 256);
  if (samples < 16) pt.at("samples").fail("must be at least 16");

  std::shared_ptr<const polarization::NeumannPoincare> op;
  if (const auto* c = std::get_if<cavity2d::CurveShape>(&spec.shape)) {
    op = c->op;
  } else if (numeric) {
    polarization::BoundaryCurve curve;
    if (const auto* d = std::get_if<cavity2d::DiskShape>(&spec.shape))
      curve = polarization::make_disk(d->radius, samples);
    else {
      const auto& e = std::get<cavity2d::EllipseShape>(spec.shape);
      curve = polarization::make_ellipse(e.p, e.q, e.rotation, samples);
    }
    op = std::make_shared<polarization::NeumannPoincare>(std::move(curve));
  }

  ResultTable t;
  t.columns = {"re_k", "im_k", "re_m11", "im_m11", "re_m12", "im_m12",
               "re_m21", "im_m21", "re_m22", "im_m22", "area", "status"};
  const Node ks = pt.at("contrasts");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const cplx k = ks.at(i).complex();
    std::vector<Cell> r{k.real(), k.imag()};
    try {
      polarization::PolarizationTensor m;
      if (op) m = op->polarization(k);
      else m = cavity2d::unit_polarization(spec.shape, k);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          r.push_back(m.matrix(a, b).real());
          r.push_back(m.matrix(a, b).imag());
        }
      r.push_back(m.shape_area);
      r.push_back(std::string("ok"));
    } catch (const Error& e) {
      for (int j = 0; j < 9; ++j) r.push_back(kNaN);
      r.push_back(std::string(e.name()));
    }
    t.rows.push_back(std::move(r));
  }
  t.provenance.emplace_back("method", op ? "nystrom" : "closed_form");
  if (op) t.provenance.emplace_back("samples", std::to_string(op->curve().size()));
  return t;
}

// ---------------------------------------------------------------- inversions

ResultTable task_invert_size(const Scenario& s, const Node& root) {
  if (s.cavity.type != CavityType::Disk)
    throw Error(ErrorKind::ConfigError, "cavity.type: invert-size needs a disk cavity");
  const Node inv = root.at("invert_size");
  const auto mode = resolve_disk_mode(s.cavity, s.mode);
  const auto modes = mode_pair(mode);
  ResultTable t;
  t.columns = {"delta_true", "delta_hat", "rel_err", "branch", "re_omega", "im_omega"};

  std::vector<cplx> measured;
  double delta_true = kNaN;
  if (inv.has("measured")) {
    const Node m = inv.at("measured");
    if (m.raw().is_array())
      for (std::size_t i = 0; i < m.size(); ++i) measured.push_back(m.at(i).complex());
    else
      measured.push_back(m.complex());
  } else {
    delta_true = inv.at("delta_true").number();
    if (!(delta_true > 0)) inv.at("delta_true").fail("must be positive");
    const auto ps = particles_2d(s, delta_true);
    const auto rep = multipole::two_disk_resonances(oracle_geometry(s, ps.front()), mode.omega0, s.oracle);
    if (rep.roots.empty())
      throw Error(ErrorKind::NoConvergence, "the oracle returned no accepted root near the mode");
    for (const auto& r : rep.roots) measured.push_back(r.result.root);
    add_oracle_provenance(t, s.oracle);
  }
  const auto tmpl = particles_2d(s, std::nullopt).front();
  for (const cplx w : measured) {
    const auto est = cavity2d::invert_size(w, modes, tmpl);
    t.rows.push_back({delta_true, est.delta, (est.delta - delta_true) / delta_true,
                      static_cast<long long>(est.branch + 1), w.real(), w.imag()});
  }
  return t;
}

ResultTable task_invert_count(const Scenario& s, const Node& root, const RunOptions& opts) {
  if (s.cavity.type != CavityType::Disk)
    throw Error(ErrorKind::ConfigError, "cavity.type: invert-count needs a disk cavity");
  const Node inv = root.at("invert_count");
  std::vector<std::vector<cavity2d::DiskMode>> modes;
  const Node ms = inv.at("modes");
  for (std::size_t i = 0; i < ms.size(); ++i)
    modes.push_back(mode_pair(resolve_disk_mode(s.cavity, detail::parse_mode(ms.at(i), CavityType::Disk))));
  if (modes.empty()) ms.fail("at least one mode is required");

  std::vector<int> n_true;
  const Node nt = inv.at("n_true");
  if (nt.raw().is_array())
    for (std::size_t i = 0; i < nt.size(); ++i) n_true.push_back(nt.at(i).integer());
  else
    n_true.push_back(nt.integer());
  const int n_min = inv.integer("n_min", 1);
  const int n_max = inv.integer("n_max", 8);
  for (int n : n_true)
    if (n < n_min || n > n_max) nt.fail("every value must lie in [n_min, n_max]");
  const double noise = inv.number("noise", 0.0);
  if (noise < 0) inv.at("noise").fail("must be nonnegative");
  const int trials = inv.integer("trials", noise > 0 ? 100 : 1);
  if (trials < 1) inv.at("trials").fail("must be positive");
  const auto seed = static_cast<std::uint64_t>(inv.integer("seed", 1));

  const auto particle = particles_2d(s, std::nullopt).front();
  struct Job {
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (int n : n_true)
    for (int k = 0; k < trials; ++k) jobs.push_back({n, k});

  std::vector<cavity2d::CountEstimate> est(jobs.size());
  parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
    // One generator per (n, trial) keeps results independent of threading.
    std::mt19937_64 rng(seed * 1000003ull + static_cast<std::uint64_t>(jobs[i].n) * 7919ull +
                        static_cast<std::uint64_t>(jobs[i].trial));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cavity2d::CountMeasurement> data;
    for (const auto& pair : modes) {
      const auto pred =
          cavity2d::shift_matrix(pair, cavity2d::ngon_family(particle, pair.front().R, jobs[i].n));
      const cplx w0 = pair.front().omega0;
      cavity2d::CountMeasurement m{pair, {}};
      for (const cplx w : pred.omega_pred) {
        cplx d = w * w - w0 * w0;
        if (noise > 0) {
          const cplx xi{gauss(rng), gauss(rng)};
          d *= 1.0 + noise * xi / std::sqrt(2.0);
        }
        m.omega.push_back(cavity2d::perturbed_frequency(w0, d));
      }
      data.push_back(std::move(m));
    }
    est[i] = cavity2d::invert_count(data, particle, n_min, n_max);
  });

  ResultTable t;
  t.columns = {"n_true", "trial", "n_hat", "score", "runner_up", "runner_up_score", "tie"};
  long long correct = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& e = est[i];
    double best = kNaN, second = kNaN;
    long long second_n = -1;
    for (const auto& [n, sc] : e.discrepancy) {
      if (n == e.n) best = sc;
      else if (second_n < 0 || sc < second) {
        second = sc;
        second_n = n;
      }
    }
    correct += e.n == jobs[i].n;
    t.rows.push_back({static_cast<long long>(jobs[i].n), static_cast<long long>(jobs[i].trial),
                      static_cast<long long>(e.n), best, second_n, second,
                      static_cast<long long>(!e.ties.empty())});
  }
  t.provenance.emplace_back("noise", num(noise));
  t.provenance.emplace_back("noise_model", "d -> d (1 + noise xi), d = w^2 - w0^2, xi complex normal, E|xi|^2 = 1");
  t.provenance.emplace_back("seed", std::to_string(seed));
  t.provenance.emplace_back("correct", std::to_string(correct) + "/" + std::to_string(jobs.size()));
  return t;
}

}  // namespace

ResultTable run(const json& config, std::string_view task, const RunOptions& opts) {
  if (std::find(std::begin(kTasks), std::end(kTasks), task) == std::end(kTasks))
    throw Error(ErrorKind::ConfigError, "unknown task '" + std::string(task) + "'");
  if (!config.is_object()) throw Error(ErrorKind::ConfigError, "<root>: expected an object");
  const Node root(config, "");
  if (root.has("task") && root.at("task").string() != task)
    root.at("task").fail("config is for task '" + root.at("task").string() + "', not '" +
                         std::string(task) + "'");

  ResultTable t;
  if (task == "pt") {
    t = task_pt(root);
  } else {
    const bool need_particles = task != "modes";
    const Scenario s = detail::parse_scenario(root, true, need_particles);
    if (need_particles && task != "invert-count" && task != "pt" &&
        s.cavity.type == CavityType::Disk)
      for (std::size_t i = 0; i < s.particles.size(); ++i)
        if (!s.particles[i].center && !s.particles[i].gap &&
            !(s.sweep && s.sweep->parameter == "z"))
          throw Error(ErrorKind::ConfigError,
                      "particles[" + std::to_string(i) + "]: needs center or gap");
    if (task == "modes") t = task_modes(s);
    else if (task == "shift") t = task_shift(s);
    else if (task == "oracle") t = task_oracle(s);
    else if (task == "sweep") t = task_sweep(s, opts);
    else if (task == "invert-size") t = task_invert_size(s, root);
    else t = task_invert_count(s, root, opts);
  }
  std::vector<std::pair<std::string, std::string>> head = {
      {"task", std::string(task)},
      {"config_hash", hex(config_hash(config))},
      {"version", version()},
      {"simd", std::string(simd::to_string(simd::active_level()))},
  };
  t.provenance.insert(t.provenance.begin(), head.begin(), head.end());
  return t;
}

}  // namespace cavishift::harness
