#pragma once

#include <vector>

#include "cavishift/common.hpp"
#include "cavishift/rootfind.hpp"

/// One-dimensional open cavity (a, b) in vacuum: resonances, exact
/// resonances with a thin inclusion, and the first-order shift.
namespace cavishift::slab1d {

struct SlabCavity {
  double a = -1;
  double b = 1;
  Medium medium;

  double length() const { return b - a; }
};

/// u0(x) = A exp(i n w x) + B exp(-i n w x) on (a, b), n = sqrt(eps mu).
/// Amplitudes are scaled so that the bilinear integral of u0^2 over (a, b)
/// is 1; `norm` stores that integral as evaluated after scaling.
struct SlabMode {
  SlabCavity cavity;
  cplx omega0;
  cplx A, B;
  cplx norm;

  cplx index() const { return cavity.medium.index(); }
  cplx value(double x) const;
  cplx derivative(double x) const;
  /// Bilinear integral of u0^2 over (a, b), closed form.
  cplx integral_sq() const;
};

struct SlabParticle {
  double x0 = 0;
  double delta = 0;
  Medium material;
};

/// Outgoing boundary mismatch at b after propagating the outgoing state at
/// a through the layers. Entire in omega; its zeros (other than 0) are the
/// resonances. Layers are (medium, thickness) from a to b.
struct Layer {
  Medium medium;
  double thickness;
};
cplx transfer_residual(const std::vector<Layer>& layers, cplx omega);

/// Closed-form lattice omega_q = (Log rho + i pi q) / (i n L), rho the
/// boundary reflection ratio. Throws SingularContrast when n/eps = +-1.
cplx closed_form_resonance(const SlabCavity& cavity, int q);

/// All resonances in the box (lower half-plane, excluding 0), refined by
/// Muller on the transfer residual. An empty result is not an error.
std::vector<SlabMode> slab_resonances(const SlabCavity& cavity, const ComplexBox& search);

/// Mode built from an already known resonance.
SlabMode make_mode(const SlabCavity& cavity, cplx omega0);

/// Resonance of the three-layer system near `seed`. Throws RegionCollapse
/// when the particle does not fit strictly inside (a, b).
rootfind::RootResult slab_perturbed_exact(const SlabCavity& cavity, const SlabParticle& particle,
                                          cplx seed, double tol = 1e-12);

/// First-order shift w1 so that w_delta ~ w0 + delta w1. With
/// `radiation_term` false the boundary contribution i eps (u(a)^2 + u(b)^2)
/// is dropped from the denominator (closed-cavity form).
cplx slab_shift(const SlabMode& mode, const SlabParticle& particle, bool radiation_term = true);

}  // namespace cavishift::slab1d
