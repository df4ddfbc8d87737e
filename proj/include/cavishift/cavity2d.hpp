#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cavishift/common.hpp"
#include "cavishift/polarization.hpp"
#include "cavishift/rootfind.hpp"

/// Disk cavity in vacuum: modes from the capacity-operator dispersion
/// relation, small-particle shift/splitting predictions and their inverses.
namespace cavishift::cavity2d {

struct CapacityCoeff {
  cplx z;
  cplx dz_domega;
};

/// Fourier symbol z_m(w, R) = w H'(wR)/H(wR) of the exterior
/// Dirichlet-to-Neumann map (cylindrical Hankel for d = 2, spherical for
/// d = 3) and its w-derivative. Throws PoleOfSymbol at Hankel zeros.
CapacityCoeff capacity_coeff(int d, int m, cplx omega, double R);

enum class Parity { Cos, Sin };

struct DiskMode {
  int m = 0;
  cplx omega0;
  cplx k;  // omega0 sqrt(eps_m mu_m)
  double R = 1;
  cplx eps_m{1.0, 0.0};
  cplx mu_m{1.0, 0.0};
  cplx c;  // amplitude: bilinear integral of u^2 over the disk is 1
  Parity parity = Parity::Cos;

  /// The other member of a degenerate pair (same mode for m = 0).
  DiskMode partner() const;
};

/// F_m(w) = (1/eps_m) k J_m'(kR) H_m(wR) - w J_m(kR) H_m'(wR).
cplx dispersion(int m, cplx eps_m, cplx mu_m, double R, cplx omega);

/// Closed-form Lommel integral of J_m(kr)^2 r over (0, R).
cplx lommel_integral(int m, cplx k, double R);

/// Mode at a known root of F_m.
DiskMode make_mode(int m, cplx eps_m, cplx mu_m, double R, cplx omega0,
                   Parity parity = Parity::Cos);

struct ModeSearch {
  std::vector<DiskMode> modes;     // cos members, sorted by Re w
  std::vector<cplx> spurious;      // roots excluded as Hankel zeros
};

/// All roots of F_m in the box (lower half-plane, away from 0 and the cut).
ModeSearch disk_modes(int m, cplx eps_m, cplx mu_m, double R, const ComplexBox& search,
                      const rootfind::BoxSearchOptions& opts = {});

struct FieldValue {
  cplx value;
  Eigen::Vector2cd gradient;
};

/// u0 inside the disk, its outgoing Hankel continuation outside.
FieldValue mode_eval(const DiskMode& mode, Point2 p);

/// Particle shapes at unit scale; the physical particle is delta times this.
struct DiskShape {
  double radius = 1;
};
struct EllipseShape {
  double p = 1, q = 1, rotation = 0;
};
struct CurveShape {
  std::shared_ptr<const polarization::NeumannPoincare> op;
};
using Shape = std::variant<DiskShape, EllipseShape, CurveShape>;

/// Largest distance from the shape's origin to its boundary (unit scale).
double shape_radius(const Shape& s);

enum class Placement { Interior, Exterior };

struct ParticleMaterial {
  cplx eps_c{1.0, 0.0};
  cplx mu_c{1.0, 0.0};
  /// Optional tabulated eps_c(frequency); evaluated at Re w0 when set.
  std::function<cplx(double)> dispersive_eps;

  cplx eps_at(cplx omega0) const {
    return dispersive_eps ? dispersive_eps(omega0.real()) : eps_c;
  }
};

struct ParticleScenario {
  Shape shape = DiskShape{};
  Point2 center;
  double delta = 0;
  ParticleMaterial material;
  Placement placement = Placement::Exterior;
};

/// Contrast entering M: eps_m/eps_c inside the cavity, 1/eps_c outside.
cplx contrast(const DiskMode& mode, const ParticleScenario& s);

polarization::PolarizationTensor unit_polarization(const Shape& shape, cplx k);

struct ShiftPrediction {
  std::vector<cplx> eta;         // eigenvalues in the w^2 variable
  Eigen::MatrixXcd matrix;       // D^{-1} N, per unit delta^d
  std::vector<cplx> omega_pred;  // sqrt(w0^2 + delta^d eta_j), branch nearest w0
  double delta = 0;              // scale used for omega_pred
};

/// Shift/splitting matrix for one mode or a degenerate pair. Scenario
/// contributions add; scenarios whose delta differs from the first one are
/// weighted by (delta_s / delta_0)^2. Throws DegenerateDenominator,
/// SingularContrast, DomainError for a particle overlapping the boundary.
ShiftPrediction shift_matrix(const std::vector<DiskMode>& modes,
                             const std::vector<ParticleScenario>& scenarios);

/// sqrt(w0^2 + s) on the branch nearest w0.
cplx perturbed_frequency(cplx omega0, cplx shift_sq);

struct SizeEstimate {
  double delta = 0;
  int branch = 0;
  cplx eta;
};

/// delta = (|w_delta^2 - w0^2| / |eta_j|)^(1/2), with j the eigenvalue whose
/// direction in the complex plane best matches the measured shift.
/// Throws ZeroSensitivity if that eta_j vanishes.
SizeEstimate invert_size(cplx measured, const std::vector<DiskMode>& modes,
                         const ParticleScenario& scenario_template);

/// n identical particles outside the disk at the vertices of a regular
/// n-gon, tangent to the boundary, first one on the positive x-axis.
std::vector<ParticleScenario> ngon_family(const ParticleScenario& particle, double R, int n);

struct CountMeasurement {
  std::vector<DiskMode> modes;   // one mode or a degenerate pair
  std::vector<cplx> omega;       // measured perturbed frequencies, one per branch
};

struct CountEstimate {
  int n = 0;
  std::vector<std::pair<int, double>> discrepancy;  // (candidate, score)
  /// Candidates whose score is within 1% of the best one (other than n).
  std::vector<int> ties;
};

/// Minimizes sum over modes and branches of
/// |dpred - dmeas|^2 / |dmeas|^2 with d = w^2 - w0^2, branches matched by
/// the cheaper pairing.
CountEstimate invert_count(const std::vector<CountMeasurement>& data,
                           const ParticleScenario& particle, int n_min, int n_max);

}  // namespace cavishift::cavity2d
