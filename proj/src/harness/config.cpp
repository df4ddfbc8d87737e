#include <cstdio>
#include <fstream>
#include <sstream>

#include "cavishift/errors.hpp"
#include "cavishift/polarization.hpp"
#include "scenario.hpp"

#ifndef CAVISHIFT_VERSION
#define CAVISHIFT_VERSION "dev"
#endif

namespace cavishift::harness {

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, "invalid JSON in '" + path + "': " + e.what());
  }
}

std::uint64_t config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string version() { return CAVISHIFT_VERSION; }

namespace detail {

Node Node::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  if (!j_->contains(key))
    throw Error(ErrorKind::ConfigError, (path_.empty() ? key : path_ + "." + key) + ": missing");
  return Node(j_->at(key), path_.empty() ? key : path_ + "." + key);
}

Node Node::at(std::size_t i) const {
  if (!j_->is_array() || i >= j_->size()) fail("expected an array with index " + std::to_string(i));
  return Node(j_->at(i), path_ + "[" + std::to_string(i) + "]");
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::fail(const std::string& what) const {
  throw Error(ErrorKind::ConfigError, (path_.empty() ? "<root>" : path_) + ": " + what);
}

double Node::number() const {
  if (!j_->is_number()) fail("expected a number");
  return j_->get<double>();
}

int Node::integer() const {
  if (!j_->is_number_integer()) fail("expected an integer");
  return j_->get<int>();
}

bool Node::boolean() const {
  if (!j_->is_boolean()) fail("expected true or false");
  return j_->get<bool>();
}

std::string Node::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

cplx Node::complex() const {
  if (j_->is_number()) return {j_->get<double>(), 0.0};
  if (!j_->is_string()) fail("expected a complex number string \"re+imj\"");
  try {
    return parse_complex(j_->get<std::string>());
  } catch (const Error& e) {
    fail(e.context());
  }
}

double Node::number(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}
int Node::integer(const std::string& key, int fallback) const {
  return has(key) ? at(key).integer() : fallback;
}
bool Node::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}
std::string Node::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}
cplx Node::complex(const std::string& key, cplx fallback) const {
  return has(key) ? at(key).complex() : fallback;
}

namespace {

Medium parse_medium(const Node& n) {
  Medium m;
  m.eps = n.complex("eps", 1.0);
  m.mu = n.complex("mu", 1.0);
  if (m.eps == cplx{}) n.at("eps").fail("must be nonzero");
  if (m.mu == cplx{}) n.at("mu").fail("must be nonzero");
  return m;
}

std::pair<double, double> parse_range(const Node& n) {
  if (n.size() != 2) n.fail("expected [min, max]");
  const double lo = n.at(0).number(), hi = n.at(1).number();
  if (!(hi > lo)) n.fail("expected min < max");
  return {lo, hi};
}

CavitySpec parse_cavity(const Node& n) {
  CavitySpec c;
  const std::string type = n.at("type").string();
  c.medium = parse_medium(n);
  if (type == "disk") {
    c.type = CavityType::Disk;
    c.R = n.number("R", 1.0);
    if (!(c.R > 0)) n.at("R").fail("must be positive");
  } else if (type == "slab") {
    c.type = CavityType::Slab;
    c.a = n.number("a", -1.0);
    c.b = n.number("b", 1.0);
    if (!(c.b > c.a)) n.fail("expected a < b");
  } else {
    n.at("type").fail("expected \"disk\" or \"slab\"");
  }
  return c;
}

cavity2d::Shape parse_shape(const Node& n, std::string& type) {
  type = n.at("type").string();
  if (type == "disk") {
    const double r = n.number("radius", 1.0);
    if (!(r > 0)) n.at("radius").fail("must be positive");
    return cavity2d::DiskShape{r};
  }
  if (type == "ellipse") {
    cavity2d::EllipseShape e{n.at("p").number(), n.at("q").number(), n.number("rotation", 0.0)};
    if (!(e.p > 0 && e.q > 0)) n.fail("semi-axes must be positive");
    return e;
  }
  if (type == "kite" || type == "curve") {
    try {
      polarization::BoundaryCurve c =
          type == "kite" ? polarization::make_kite(n.integer("samples", 256))
                         : polarization::read_curve_file(n.at("file").string());
      return cavity2d::CurveShape{std::make_shared<polarization::NeumannPoincare>(std::move(c))};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      n.fail(std::string(e.name()) + ": " + e.context());
    }
  }
  n.at("type").fail("expected disk, ellipse, kite or curve");
}

}  // namespace

ComplexBox parse_box(const Node& n) {
  const auto [rl, rh] = parse_range(n.at("re"));
  const auto [il, ih] = parse_range(n.at("im"));
  return {rl, rh, il, ih};
}

ModeSpec parse_mode(const Node& n, CavityType type) {
  ModeSpec m;
  if (type == CavityType::Disk) {
    m.m = n.integer("m", 0);
    if (m.m < 0) n.at("m").fail("must be nonnegative");
  }
  if (n.has("omega0")) m.omega0 = n.at("omega0").complex();
  if (n.has("search")) m.search = parse_box(n.at("search"));
  if (!m.omega0 && !m.search) n.fail("needs omega0 or search");
  m.index = n.integer("index", 0);
  if (m.index < 0) n.at("index").fail("must be nonnegative");
  return m;
}

ParticleSpec parse_particle(const Node& n, CavityType type) {
  ParticleSpec p;
  p.delta = n.number("delta", 0.0);
  if (p.delta < 0) n.at("delta").fail("must be nonnegative");
  p.material = parse_medium(n);
  if (type == CavityType::Slab) {
    p.x0 = n.number("x0", 0.0);
    return p;
  }
  if (n.has("shape")) p.shape = parse_shape(n.at("shape"), p.shape_type);
  if (n.has("center")) {
    const Node c = n.at("center");
    if (c.size() != 2) c.fail("expected [x, y]");
    p.center = Point2{c.at(0).number(), c.at(1).number()};
  }
  if (n.has("gap")) p.gap = n.at("gap").number();
  p.angle = n.number("angle", 0.0);
  if (n.has("placement")) {
    const std::string s = n.at("placement").string();
    if (s == "interior") p.placement = cavity2d::Placement::Interior;
    else if (s == "exterior") p.placement = cavity2d::Placement::Exterior;
    else n.at("placement").fail("expected interior or exterior");
  }
  return p;
}

SweepSpec parse_sweep(const Node& n) {
  SweepSpec s;
  s.parameter = n.at("parameter").string();
  s.oracle = n.boolean("oracle", false);
  s.track = n.boolean("track", false);
  if (n.has("values")) {
    const Node v = n.at("values");
    for (std::size_t i = 0; i < v.size(); ++i) s.values.push_back(v.at(i).number());
  } else if (n.has("logspace") || n.has("linspace")) {
    const bool log = n.has("logspace");
    const Node g = n.at(log ? "logspace" : "linspace");
    const double from = g.at("from").number(), to = g.at("to").number();
    const int count = g.at("count").integer();
    if (count < 1) g.at("count").fail("must be positive");
    if (log && !(from > 0 && to > 0)) g.fail("logspace bounds must be positive");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      s.values.push_back(log ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                             : from + t * (to - from));
    }
  } else {
    n.fail("needs values, logspace or linspace");
  }
  if (s.values.empty()) n.fail("no sweep values");
  return s;
}

Scenario parse_scenario(const Node& root, bool need_mode, bool need_particles) {
  Scenario s;
  s.cavity = parse_cavity(root.at("cavity"));
  if (need_mode || root.has("mode")) s.mode = parse_mode(root.at("mode"), s.cavity.type);
  if (need_particles || root.has("particles")) {
    const Node ps = root.at("particles");
    if (ps.size() == 0) ps.fail("at least one particle is required");
    for (std::size_t i = 0; i < ps.size(); ++i)
      s.particles.push_back(parse_particle(ps.at(i), s.cavity.type));
  }
  if (root.has("sweep")) s.sweep = parse_sweep(root.at("sweep"));
  if (root.has("oracle")) {
    const Node o = root.at("oracle");
    s.oracle.n1 = o.integer("n1", -1);
    s.oracle.n2 = o.integer("n2", s.oracle.n2);
    s.oracle.radius = o.number("radius", s.oracle.radius);
    s.oracle.quadrature_points = o.integer("quadrature_points", s.oracle.quadrature_points);
    s.oracle.tol = o.number("tol", s.oracle.tol);
    s.oracle.stability_tol = o.number("stability_tol", s.oracle.stability_tol);
    if (s.oracle.n2 < 0) o.at("n2").fail("must be nonnegative");
    if (!(s.oracle.radius > 0)) o.at("radius").fail("must be positive");
    if (s.oracle.quadrature_points < 8) o.at("quadrature_points").fail("must be at least 8");
  }
  s.oracle.mode_order = s.mode.m;
  return s;
}

cavity2d::ParticleScenario materialize(const ParticleSpec& p, double R, double delta,
                                       std::optional<double> z) {
  cavity2d::ParticleScenario s;
  s.shape = p.shape;
  s.delta = delta;
  s.material.eps_c = p.material.eps;
  s.material.mu_c = p.material.mu;
  double dist;
  if (z) dist = *z;
  else if (p.gap) dist = R + *p.gap * delta;
  else if (p.center) dist = -1;
  else dist = (R + delta * cavity2d::shape_radius(p.shape)) * (1.0 + 1e-12);  // tangent
  s.center = dist < 0 ? *p.center : Point2{dist * std::cos(p.angle), dist * std::sin(p.angle)};
  s.placement = p.placement ? *p.placement
                            : (s.center.norm() < R ? cavity2d::Placement::Interior
                                                   : cavity2d::Placement::Exterior);
  return s;
}

}  // namespace detail
}  // namespace cavishift::harness
