#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nvem/assembly.hpp"
#include "nvem/material.hpp"
#include "nvem/mesh.hpp"

namespace nvem {

/// Flat "key = value" file with [section] headers and '#' comments. Repeated
/// keys are kept in order (boundary-condition lists rely on this). Unknown
/// sections or keys are rejected with the list of valid ones.
class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section, const std::string& key) const;

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;

  void require_known_keys() const;

 private:
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

struct BcDirichletEntry {
  std::string tag;
  std::optional<double> ux, uy;
};

struct BcTractionEntry {
  std::string tag;
  Vec2 traction = Vec2::Zero();
};

struct DynamicsBlock {
  double alpha = -0.1;
  double dt = 1e-3;
  double t_end = 1.6;
  double q1 = 0.0, q2 = 0.0;
  double gravity = 0.0;  // magnitude, acts in -y
  std::string load = "constant";
  double amplitude = 1.0;  // point-force magnitude multiplier F
  double ramp_a = 0.0, ramp_b = 1.0, cutoff = 0.0;
  double omega = 0.0;
  Vec2 point = Vec2::Zero();  // point-load location (nearest node)
  Vec2 force = Vec2::Zero();  // point-load direction/magnitude
  std::optional<Vec2> probe;
  int vtk_every = 0;
};

/// Typed run configuration shared by all CLI commands.
struct RunConfig {
  std::string problem = "custom";
  Method method = Method::Nvem;
  Stabilization stab = Stabilization::Dtilde;
  double tolerance = 1e-12;
  std::vector<std::string> methods;  // converge: "nvem-dtilde vem-plain ..."

  std::string mesh_kind = "quad";  // quad | distorted-quad | hex | file
  int nx = 8, ny = 8;
  int level = 0;
  Rect domain{0.0, 0.0, 1.0, 1.0};
  bool domain_set = false;
  double distortion = 0.3;
  std::uint64_t seed = 1;
  std::string mesh_file;
  std::vector<std::string> mesh_files;

  std::optional<MaterialModel> material;

  std::vector<BcDirichletEntry> bc_dirichlet;
  std::vector<BcTractionEntry> bc_traction;

  DynamicsBlock dynamics;
  bool has_dynamics = false;

  std::string out_dir = "out";
  int eig_count = 8;
};

RunConfig parse_run_config(const Config& cfg);

Method parse_method(const std::string& s);
Stabilization parse_stabilization(const std::string& s);

}  // namespace nvem
