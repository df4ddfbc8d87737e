#include <algorithm>
#include <cmath>
#include <limits>

#include "cavishift/cavity2d.hpp"
#include "cavishift/errors.hpp"

namespace cavishift::cavity2d {
namespace {

constexpr double kTieRelative = 0.01;

double angle_gap(cplx a, cplx b) {
  const double d = std::abs(std::arg(a) - std::arg(b));
  return std::min(d, 2.0 * pi - d);
}

}  // namespace

SizeEstimate invert_size(cplx measured, const std::vector<DiskMode>& modes,
                         const ParticleScenario& scenario_template) {
  ParticleScenario s = scenario_template;
  if (!(s.delta > 0)) s.delta = 1e-6;  // only the placement check sees it
  const ShiftPrediction pred = shift_matrix(modes, {s});
  const cplx w0 = modes.front().omega0;
  const cplx shift = measured * measured - w0 * w0;

  SizeEstimate out;
  int best = -1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pred.eta.size(); ++j) {
    if (pred.eta[j] == cplx{}) continue;
    const double gap = shift == cplx{} ? 0.0 : angle_gap(shift, pred.eta[j]);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(j);
    }
  }
  const double scale = pred.matrix.norm();
  if (best < 0 || std::abs(pred.eta[best]) <= 1e-14 * scale || scale == 0.0)
    throw Error(ErrorKind::ZeroSensitivity, "the shift is insensitive to the particle size");
  out.branch = best;
  out.eta = pred.eta[best];
  out.delta = std::sqrt(std::abs(shift) / std::abs(out.eta));
  return out;
}

std::vector<ParticleScenario> ngon_family(const ParticleScenario& particle, double R, int n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "particle count must be positive");
  const double ring = R + particle.delta * shape_radius(particle.shape);
  std::vector<ParticleScenario> out;
  for (int i = 0; i < n; ++i) {
    ParticleScenario s = particle;
    const double phi = 2.0 * pi * i / n;
    s.center = {ring * std::cos(phi), ring * std::sin(phi)};
    s.placement = Placement::Exterior;
    // Tangent placement sits exactly on the boundary; nudge outward so the
    // strict-exterior check holds.
    s.center = (1.0 + 1e-12) * s.center;
    if (auto* e = std::get_if<EllipseShape>(&s.shape)) e->rotation += phi;
    out.push_back(s);
  }
  return out;
}

CountEstimate invert_count(const std::vector<CountMeasurement>& data,
                           const ParticleScenario& particle, int n_min, int n_max) {
  if (data.empty()) throw Error(ErrorKind::DomainError, "no measurements");
  if (n_min < 1 || n_max < n_min) throw Error(ErrorKind::DomainError, "bad candidate range");
  CountEstimate out;
  double best = std::numeric_limits<double>::infinity();
  for (int n = n_min; n <= n_max; ++n) {
    double score = 0;
    for (const auto& meas : data) {
      const DiskMode& mode = meas.modes.front();
      const auto family = ngon_family(particle, mode.R, n);
      const ShiftPrediction pred = shift_matrix(meas.modes, family);
      const cplx w0sq = mode.omega0 * mode.omega0;
      std::vector<cplx> dp, dm;
      for (const cplx w : pred.omega_pred) dp.push_back(w * w - w0sq);
      for (const cplx w : meas.omega) dm.push_back(w * w - w0sq);
      if (dp.size() != dm.size())
        throw Error(ErrorKind::DomainError, "measurement branch count does not match the modes");
      auto cost = [&](const std::vector<int>& perm) {
        double c = 0;
        for (std::size_t j = 0; j < dm.size(); ++j) {
          const double ref = std::max(std::abs(dm[j]), 1e-300);
          c += std::norm(dp[perm[j]] - dm[j]) / (ref * ref);
        }
        return c;
      };
      if (dm.size() == 1) {
        score += cost({0});
      } else {
        score += std::min(cost({0, 1}), cost({1, 0}));
      }
    }
    out.discrepancy.emplace_back(n, score);
    if (score < best) {
      best = score;
      out.n = n;
    }
  }
  for (const auto& [n, score] : out.discrepancy)
    if (n != out.n && score <= best + kTieRelative * std::max(best, 1e-300))
      out.ties.push_back(n);
  return out;
}

}  // namespace cavishift::cavity2d
