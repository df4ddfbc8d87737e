#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavishift/common.hpp"

namespace cavishift::polarization {

/// Samples of a smooth closed curve for periodic trapezoid quadrature:
/// points, unit outward normals and arclength weights, counterclockwise.
/// The last sample is not a repeat of the first.
struct BoundaryCurve {
  std::vector<double> t, x, y, nx, ny, w;
  /// Signed curvature (positive where convex) if known analytically; empty
  /// for curves read from files.
  std::vector<double> curvature;

  std::size_t size() const { return x.size(); }
  /// Enclosed area from the divergence theorem.
  double area() const;
  double length() const;
  /// Throws BadCurve on inconsistent sizes, non-unit normals, nonpositive
  /// weights, inward normals, a gap between last and first samples, or self
  /// intersection.
  void validate() const;
};

BoundaryCurve make_disk(double radius, int samples, Point2 center = {});
BoundaryCurve make_ellipse(double p, double q, double rotation, int samples, Point2 center = {});
/// (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
BoundaryCurve make_kite(int samples);

/// Scale about the origin, then rotate.
BoundaryCurve transformed(const BoundaryCurve& c, double scale, double rotation);

/// Text format: header `# curve d=2 N=<count>`, then N rows `t x y nx ny w`.
BoundaryCurve read_curve(std::istream& in);
BoundaryCurve read_curve_file(const std::string& path);
void write_curve(std::ostream& out, const BoundaryCurve& c);

}  // namespace cavishift::polarization
