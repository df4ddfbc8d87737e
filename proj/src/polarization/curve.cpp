#include "cavishift/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cavishift/errors.hpp"

namespace cavishift::polarization {
namespace {

struct Param {
  double x, y, dx, dy, ddx, ddy;
};

template <class Fn>
BoundaryCurve sample(int n, Fn&& fn) {
  if (n < 8) throw Error(ErrorKind::BadCurve, "need at least 8 samples");
  BoundaryCurve c;
  const double h = 2.0 * pi / n;
  for (int i = 0; i < n; ++i) {
    const double t = h * i;
    const Param p = fn(t);
    const double speed = std::hypot(p.dx, p.dy);
    c.t.push_back(t);
    c.x.push_back(p.x);
    c.y.push_back(p.y);
    c.nx.push_back(p.dy / speed);
    c.ny.push_back(-p.dx / speed);
    c.w.push_back(speed * h);
    c.curvature.push_back((p.dx * p.ddy - p.dy * p.ddx) / (speed * speed * speed));
  }
  return c;
}

bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
         o4 != 0;
}

}  // namespace

double BoundaryCurve::area() const {
  double a = 0;
  for (std::size_t i = 0; i < size(); ++i) a += 0.5 * (x[i] * nx[i] + y[i] * ny[i]) * w[i];
  return a;
}

double BoundaryCurve::length() const {
  double l = 0;
  for (double wi : w) l += wi;
  return l;
}

void BoundaryCurve::validate() const {
  const std::size_t n = size();
  if (n < 8) throw Error(ErrorKind::BadCurve, "need at least 8 samples");
  if (y.size() != n || nx.size() != n || ny.size() != n || w.size() != n ||
      (!t.empty() && t.size() != n) || (!curvature.empty() && curvature.size() != n))
    throw Error(ErrorKind::BadCurve, "column lengths differ");
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(std::hypot(nx[i], ny[i]) - 1.0) > 1e-8)
      throw Error(ErrorKind::BadCurve, "normal at sample " + std::to_string(i) + " is not unit");
    if (!(w[i] > 0.0))
      throw Error(ErrorKind::BadCurve, "nonpositive weight at sample " + std::to_string(i));
    const std::size_t j = (i + 1) % n;
    gaps[i] = std::hypot(x[j] - x[i], y[j] - y[i]);
  }
  // Closure: the wrap-around gap must look like any other gap.
  std::vector<double> sorted = gaps;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  const double max_gap = *std::max_element(gaps.begin(), gaps.end());
  if (gaps[n - 1] > 3.0 * median || max_gap > 10.0 * median || gaps[n - 1] < 1e-3 * median)
    throw Error(ErrorKind::BadCurve, "curve is not closed or not uniformly sampled");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    const double tx = x[ip] - x[im], ty = y[ip] - y[im];
    const double tn = std::hypot(tx, ty);
    if ((ty * nx[i] - tx * ny[i]) / tn < 0.5)
      throw Error(ErrorKind::BadCurve,
                  "normal at sample " + std::to_string(i) + " is not outward for a counterclockwise curve");
  }
  if (area() <= 0.0) throw Error(ErrorKind::BadCurve, "enclosed area is not positive");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross({x[i], y[i]}, {x[i + 1], y[i + 1]}, {x[j], y[j]},
                         {x[(j + 1) % n], y[(j + 1) % n]}))
        throw Error(ErrorKind::BadCurve, "curve self-intersects");
    }
}

BoundaryCurve make_disk(double radius, int samples, Point2 center) {
  if (!(radius > 0)) throw Error(ErrorKind::BadCurve, "radius must be positive");
  return sample(samples, [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return Param{center.x + radius * c, center.y + radius * s, -radius * s, radius * c,
                 -radius * c, -radius * s};
  });
}

BoundaryCurve make_ellipse(double p, double q, double rotation, int samples, Point2 center) {
  if (!(p > 0) || !(q > 0)) throw Error(ErrorKind::BadCurve, "semi-axes must be positive");
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  return sample(samples, [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    auto rot = [&](double a, double b) { return std::pair{cr * a - sr * b, sr * a + cr * b}; };
    const auto [x, y] = rot(p * c, q * s);
    const auto [dx, dy] = rot(-p * s, q * c);
    const auto [ddx, ddy] = rot(-p * c, -q * s);
    return Param{center.x + x, center.y + y, dx, dy, ddx, ddy};
  });
}

BoundaryCurve make_kite(int samples) {
  return sample(samples, [](double t) {
    return Param{std::cos(t) + 0.65 * std::cos(2 * t) - 0.65, 1.5 * std::sin(t),
                 -std::sin(t) - 1.3 * std::sin(2 * t), 1.5 * std::cos(t),
                 -std::cos(t) - 2.6 * std::cos(2 * t), -1.5 * std::sin(t)};
  });
}

BoundaryCurve transformed(const BoundaryCurve& c, double scale, double rotation) {
  if (!(scale > 0)) throw Error(ErrorKind::BadCurve, "scale must be positive");
  BoundaryCurve out = c;
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.x[i] = scale * (cr * c.x[i] - sr * c.y[i]);
    out.y[i] = scale * (sr * c.x[i] + cr * c.y[i]);
    out.nx[i] = cr * c.nx[i] - sr * c.ny[i];
    out.ny[i] = sr * c.nx[i] + cr * c.ny[i];
    out.w[i] = scale * c.w[i];
  }
  for (double& k : out.curvature) k /= scale;
  return out;
}

BoundaryCurve read_curve(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::BadCurve, "empty curve file");
  long count = -1;
  int dim = 0;
  if (std::sscanf(line.c_str(), "# curve d=%d N=%ld", &dim, &count) != 2 || dim != 2 || count < 0)
    throw Error(ErrorKind::BadCurve, "expected header '# curve d=2 N=<count>'");
  BoundaryCurve c;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double t, x, y, nx, ny, w;
    if (!(row >> t >> x >> y >> nx >> ny >> w))
      throw Error(ErrorKind::BadCurve, "malformed row: " + line);
    c.t.push_back(t);
    c.x.push_back(x);
    c.y.push_back(y);
    c.nx.push_back(nx);
    c.ny.push_back(ny);
    c.w.push_back(w);
  }
  if (static_cast<long>(c.size()) != count)
    throw Error(ErrorKind::BadCurve, "header says N=" + std::to_string(count) + " but found " +
                                         std::to_string(c.size()) + " rows");
  c.validate();
  return c;
}

BoundaryCurve read_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadCurve, "cannot open " + path);
  return read_curve(in);
}

void write_curve(std::ostream& out, const BoundaryCurve& c) {
  out << "# curve d=2 N=" << c.size() << "\n";
  char buf[256];
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double t = c.t.empty() ? 2.0 * pi * i / c.size() : c.t[i];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", t, c.x[i], c.y[i],
                  c.nx[i], c.ny[i], c.w[i]);
    out << buf;
  }
}

}  // namespace cavishift::polarization
