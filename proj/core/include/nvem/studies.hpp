#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nvem/assembly.hpp"
#include "nvem/exact_solutions.hpp"
#include "nvem/norms.hpp"

namespace nvem {

struct MethodSpec {
  Method method = Method::Nvem;
  Stabilization stab = Stabilization::Dtilde;
  std::string label() const { return to_string(method) + "-" + to_string(stab); }
};

/// A benchmark: mesh sequence, material, boundary conditions, and (when
/// available) the exact solution the error norms are measured against.
struct BenchmarkProblem {
  std::string name;
  MaterialModel material;
  int level_count = 0;
  std::function<PolygonalMesh(int level)> mesh_at_level;
  std::function<DirichletMap(const PolygonalMesh&)> dirichlet;
  std::function<LoadSpec(const PolygonalMesh&)> loads;
  std::optional<ExactSolution> exact;
  Vec2 probe = Vec2::Zero();  // displacement probe (Cook tip)
};

BenchmarkProblem make_patch_test(StructuredKind kind, int nx = 8, int ny = 8,
                                 std::uint64_t seed = 7);
BenchmarkProblem make_colliding_flow();
BenchmarkProblem make_cantilever_beam(double nu);
BenchmarkProblem make_cooks_membrane(const std::vector<std::string>& mesh_files);
BenchmarkProblem make_plate_with_hole(bool plane_stress, bool distorted);

/// Quarter plate (0,a)^2 minus the hole r < r0, rim nodes placed exactly on
/// r = r0, radial grading quadratic toward the rim. Tags: rim, bottom, left,
/// right (x = a), top (y = a). ns must be even so theta = pi/4 is a mesh line.
PolygonalMesh plate_hole_mesh(int ns, int nt, double r0, double a, bool distorted = false,
                              std::uint64_t seed = 11);

struct SolvedProblem {
  StaticSolution solution;
  NodalFields fields;
  std::optional<ErrorReport> report;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

SolvedProblem solve_benchmark(const BenchmarkProblem& problem, const PolygonalMesh& mesh,
                              Method method, Stabilization stab, const WarningSink& warn = {});

/// Patch test (linear field, E = 1e7 psi, nu = 0.3, plane strain, b = 0).
ErrorReport run_patch_test(const PolygonalMesh& mesh, Method method, Stabilization stab);

struct MethodStudy {
  MethodSpec spec;
  std::vector<ErrorReport> levels;
  double rate_l2 = 0.0, rate_h1 = 0.0, rate_lp = 0.0;  // log-log LSQ slopes
};

struct StudyResult {
  std::string problem;
  std::vector<MethodStudy> methods;
};

/// Runs `problem` over its mesh sequence for every spec and fits convergence
/// rates. Requires >= 3 levels with strictly decreasing h.
StudyResult convergence_study(const BenchmarkProblem& problem,
                              const std::vector<MethodSpec>& specs);

struct CookStudy {
  std::vector<MethodSpec> specs;
  std::vector<std::vector<double>> tip_uy;   // [spec][level]
  std::vector<int> dofs;                     // per level
  std::vector<double> applied_force;         // per level, assembled total shear
};

CookStudy cooks_membrane_study(const BenchmarkProblem& problem,
                               const std::vector<MethodSpec>& specs);

}  // namespace nvem
