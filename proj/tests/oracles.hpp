#pragma once

// Independent reference implementations used only by the tests. Each one
// deliberately takes a different numerical route than the library: boundary
// integrals by per-edge Gauss quadrature instead of the closed-form
// trapezoidal coefficients, dense global-frame nodal assembly instead of
// patch-frame scatter, Duffy-mapped 16-point cubature instead of the mid-edge
// rule, and a first-order-system trapezoidal integrator instead of Newmark.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nvem/exact_solutions.hpp"
#include "nvem/material.hpp"
#include "nvem/mesh.hpp"

namespace nvem::oracle {

using Polygon = std::vector<Vec2>;

/// Area via (1/2) closed boundary integral of x.n ds, 2-point Gauss per edge.
double polygon_area(const Polygon& poly);

/// Element-average strain of piecewise-linear boundary data u_a via the
/// divergence theorem, (1/2|E|) int (u x n + n x u) ds, 2-pt Gauss per edge.
Eigen::Vector3d average_strain(const Polygon& poly, const std::vector<Vec2>& u);

/// B from per-edge integration of the hat functions.
Eigen::MatrixXd strain_matrix(const Polygon& poly);

/// Full element stiffness |E| B^T D B + (I-P)^T S (I-P), everything rebuilt
/// from the boundary-integral quantities above.
Eigen::MatrixXd element_stiffness(const Polygon& poly, const ConstitutiveMatrix& D,
                                  const ConstitutiveMatrix& D_stab);

/// Projected-basis matrix W(x) rebuilt from the oracle B.
Eigen::MatrixXd projected_basis(const Polygon& poly, const Vec2& x);

/// Mass by 4x4 Duffy-collapsed Gauss (16 points) per fan triangle.
Eigen::MatrixXd element_mass(const Polygon& poly, double rho);

/// Naive dense global NVEM stiffness: per node, scan the patch, build the
/// area-weighted averages in the full global dof frame and accumulate
/// |I| B_I^T D B_I + (I-P)_I^T S_I (I-P)_I. D_stab == nullptr skips stability.
Eigen::MatrixXd nvem_global_stiffness(const PolygonalMesh& mesh, const ConstitutiveMatrix& D,
                                      const ConstitutiveMatrix* D_stab);

/// Dense symmetric-elimination static solve, for tiny meshes.
Eigen::VectorXd dense_static_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& F,
                                   const std::map<int, double>& bc);

/// Trapezoidal rule on the first-order system [d; v], dense block solve each
/// step; returns (d, v) trajectories including t = 0.
struct TrapezoidalResult {
  std::vector<Eigen::VectorXd> d, v;
};
TrapezoidalResult trapezoidal(const Eigen::MatrixXd& M, const Eigen::MatrixXd& C,
                              const Eigen::MatrixXd& K,
                              const std::function<Eigen::VectorXd(double)>& F,
                              const Eigen::VectorXd& d0, const Eigen::VectorXd& v0, double dt,
                              int steps);

/// Central-difference residual of div(sigma) + b at a point.
Vec2 pde_residual(const ExactSolution& exact, const Vec2& x, double h);

/// Deterministic corpus of valid meshes (structured, distorted, hex-dominant,
/// hand-built polygons) for the property suites.
std::vector<PolygonalMesh> mesh_corpus(int randomized_count, std::uint64_t seed = 42);

}  // namespace nvem::oracle
