#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavishift/cavity2d.hpp"
#include "cavishift/harness.hpp"
#include "cavishift/multipole.hpp"
#include "cavishift/slab1d.hpp"

namespace cavishift::harness::detail {

/// JSON node plus its path, for error messages like `particles[0].delta`.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const;
  Node at(std::size_t i) const;
  std::size_t size() const;

  double number() const;
  int integer() const;
  bool boolean() const;
  std::string string() const;
  cplx complex() const;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  cplx complex(const std::string& key, cplx fallback) const;

  [[noreturn]] void fail(const std::string& what) const;

 private:
  const json* j_;
  std::string path_;
};

enum class CavityType { Slab, Disk };

struct CavitySpec {
  CavityType type = CavityType::Disk;
  double R = 1;
  double a = -1, b = 1;
  Medium medium;
};

struct ModeSpec {
  int m = 0;
  std::optional<cplx> omega0;
  std::optional<ComplexBox> search;
  int index = 0;
};

/// Particle description before the sweep parameter is applied.
struct ParticleSpec {
  cavity2d::Shape shape = cavity2d::DiskShape{};
  std::string shape_type = "disk";
  std::optional<Point2> center;
  std::optional<double> gap;  // center at distance R + gap * delta
  double angle = 0;
  double delta = 0;
  double x0 = 0;  // slab
  Medium material;
  std::optional<cavity2d::Placement> placement;
};

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  bool oracle = false;
  bool track = false;  // match oracle roots row to row instead of to the prediction
};

struct Scenario {
  CavitySpec cavity;
  ModeSpec mode;
  std::vector<ParticleSpec> particles;
  std::optional<SweepSpec> sweep;
  multipole::OracleOptions oracle;
};

Scenario parse_scenario(const Node& root, bool need_mode, bool need_particles);
ComplexBox parse_box(const Node& n);
ModeSpec parse_mode(const Node& n, CavityType type);
ParticleSpec parse_particle(const Node& n, CavityType type);
SweepSpec parse_sweep(const Node& n);

/// Concrete particle for the 2D modules.
cavity2d::ParticleScenario materialize(const ParticleSpec& p, double R, double delta,
                                       std::optional<double> z = std::nullopt);

}  // namespace cavishift::harness::detail
