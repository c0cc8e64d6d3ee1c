#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "nvem/element_ops.hpp"
#include "nvem/material.hpp"
#include "nvem/mesh.hpp"

namespace nvem {

/// Per-element geometry and operators, computed once and shared by patches.
struct ElementCache {
  std::vector<ElementGeometry> geometry;
  std::vector<ElementOperators> operators;

  static ElementCache build(const PolygonalMesh& mesh);
};

/// Affine nodal average F_I = sum_{E in T_I} w_E scatter(F_E), w_E =
/// |E| / (N_E^V |I|). `per_element(e)` must return the element-level matrix;
/// a dimension equal to 2*N_E^V is scattered into the 2P patch-dof frame,
/// any other dimension is passed through (scalars, Voigt rows, 2-row bases).
Eigen::MatrixXd nodal_average(const PolygonalMesh& mesh, const NodalPatch& patch,
                              const std::function<Eigen::MatrixXd(int element)>& per_element);

/// Patch-level operators over the ordered patch dofs (2 per patch node).
struct NodalOperators {
  int node = -1;
  double area = 0.0;
  std::vector<int> patch_nodes;
  Eigen::MatrixXd B_I;         // 3 x 2P
  Eigen::MatrixXd IminusP_I;   // 2P x 2P
  Eigen::MatrixXd PiPhi_I;     // 2 x 2P, projected basis averaged at the node
  Eigen::MatrixXd Nbar_I;      // 2 x 2P

  int dof_count() const { return 2 * static_cast<int>(patch_nodes.size()); }
};

NodalOperators build_nodal_operators(const PolygonalMesh& mesh, const NodalPatch& patch,
                                     const ElementCache& cache);

/// Diagonal D-recipe entries max(1, (|I| B_I^T D_stab B_I)_ii).
Eigen::VectorXd nodal_stability_diagonal(const NodalOperators& ops,
                                         const ConstitutiveMatrix& D_stab);

/// K_I = |I| B_I^T D B_I + (I-P)_I^T S_I (I-P)_I. Passing D_stab = nullptr
/// omits the stability term entirely (the intentionally unstabilized mode).
Eigen::MatrixXd nodal_stiffness(const NodalOperators& ops, const ConstitutiveMatrix& D,
                                const ConstitutiveMatrix* D_stab);

/// f_I = |I| Nbar_I^T b_I with b_I the nodal average of the per-element b_hat.
Eigen::VectorXd nodal_force_body(const PolygonalMesh& mesh, const NodalPatch& patch,
                                 const NodalOperators& ops,
                                 const std::function<Vec2(int element)>& b_hat);

/// M_I = rho |I| (PiPhi_I^T PiPhi_I + (I-P)_I^T (I-P)_I).
Eigen::MatrixXd nodal_mass(const NodalOperators& ops, double rho);

/// Nodal force vectors for tractions on a set of Neumann edges, one entry per
/// node incident to a loaded edge. Patch areas, averages and the edge Nbar all
/// live on the one-dimensional boundary domain: |I| = sum |e|/2.
struct NodalTractionForce {
  int node = -1;
  std::vector<int> patch_nodes;  // nodes of the incident loaded edges
  Eigen::VectorXd force;         // 2 per patch node
};

std::vector<NodalTractionForce> nodal_forces_traction(
    const std::vector<TaggedEdge>& edges, const std::function<Vec2(int edge_index)>& t_hat);

/// Nodal strain/stress/pressure/von Mises recovered from a solved global
/// displacement vector: eps_I = B_I d_patch, sigma_I = D eps_I,
/// p_I = -lambda tr(eps_I).
struct NodalFields {
  Eigen::MatrixXd strain;   // N x 3 Voigt
  Eigen::MatrixXd stress;   // N x 3 Voigt
  Eigen::VectorXd pressure;
  Eigen::VectorXd von_mises;
};

NodalFields recover_nodal_fields(const PolygonalMesh& mesh, const std::vector<NodalPatch>& patches,
                                 const ElementCache& cache, const Eigen::VectorXd& displacement,
                                 const MaterialModel& material);

}  // namespace nvem
