#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nvem/material.hpp"
#include "nvem/mesh.hpp"
#include "nvem/nodal_ops.hpp"

namespace nvem {

enum class Method { Vem, Nvem };
enum class Stabilization { Plain, Dtilde, DmuFull, DmuShear };

std::string to_string(Method m);
std::string to_string(Stabilization s);

/// Stability constitutive matrix for the (method, stabilization) pair;
/// nullopt means no stability term at all (the unstabilized NVEM mode).
/// For the element path "plain" is the D-recipe with the material's own D.
std::optional<ConstitutiveMatrix> stabilization_matrix(Method method, Stabilization stab,
                                                       const MaterialModel& material);

struct TractionLoad {
  std::string tag;
  std::function<Vec2(const Vec2&)> traction;  // evaluated pointwise, edge-averaged by 2-pt Gauss
};

struct PointLoad {
  Vec2 at = Vec2::Zero();  // applied to the nearest node
  Vec2 force = Vec2::Zero();
};

struct LoadSpec {
  std::function<Vec2(const Vec2&)> body;  // force/volume, sampled at the element vertex mean
  std::vector<TractionLoad> tractions;
  std::vector<PointLoad> point_loads;
};

struct GlobalSystem {
  Eigen::SparseMatrix<double> K;
  std::optional<Eigen::SparseMatrix<double>> M;
  Eigen::VectorXd F;
  Method method = Method::Vem;
  int node_count = 0;
};

struct AssembleOptions {
  bool with_mass = false;
};

GlobalSystem assemble(const PolygonalMesh& mesh, Method method, const MaterialModel& material,
                      Stabilization stab, const LoadSpec& loads, const AssembleOptions& opts = {},
                      const WarningSink& warn = {});

/// Force vector alone (same load handling as assemble); used by the dynamics
/// driver to split time-scheduled loads from the permanent ones.
Eigen::VectorXd assemble_force_vector(const PolygonalMesh& mesh, Method method,
                                      const MaterialModel& material, const LoadSpec& loads);

/// dof -> prescribed value
using DirichletMap = std::map<int, double>;

void dirichlet_on_tag(DirichletMap& bc, const PolygonalMesh& mesh, const std::string& tag,
                      const std::optional<std::function<double(const Vec2&)>>& ux,
                      const std::optional<std::function<double(const Vec2&)>>& uy);
void dirichlet_on_boundary(DirichletMap& bc, const PolygonalMesh& mesh,
                           const std::function<Vec2(const Vec2&)>& u);

/// Symmetric row/column elimination. The reduced right-hand side carries the
/// coupling correction -K[free, constrained] * u_D.
struct ReducedSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd F;
  std::vector<int> free_dofs;     // reduced index -> full dof
  std::vector<int> full_to_free;  // full dof -> reduced index or -1
  Eigen::VectorXd prescribed;     // full-size, zero at free dofs
  Eigen::VectorXd bc_correction;  // reduced-size, -K[free,constrained] u_D
  int full_size = 0;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
  Eigen::VectorXd reduce_vector(const Eigen::VectorXd& full) const;
  Eigen::SparseMatrix<double> reduce_matrix(const Eigen::SparseMatrix<double>& full) const;
};

ReducedSystem apply_dirichlet(const GlobalSystem& system, const DirichletMap& bc);

struct StaticSolution {
  Eigen::VectorXd displacement;  // full-size, prescribed values honored exactly
  double residual = 0.0;         // ||K d - F|| / ||F|| on the reduced system
};

StaticSolution solve_static(const ReducedSystem& system);

struct EigenSpectrum {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd modes;   // columns; M-orthonormal when M is supplied
};

/// k smallest eigenpairs of K x = lambda x (or K x = lambda M x). Dense solve
/// below `dense_threshold` dofs, shift-invert subspace iteration above.
EigenSpectrum eigen_spectrum(const Eigen::SparseMatrix<double>& K, int k,
                             const Eigen::SparseMatrix<double>* M = nullptr,
                             int dense_threshold = 5000);

/// C = q1 M + q2 K.
Eigen::SparseMatrix<double> rayleigh_damping(const Eigen::SparseMatrix<double>& M,
                                             const Eigen::SparseMatrix<double>& K, double q1,
                                             double q2);

}  // namespace nvem
