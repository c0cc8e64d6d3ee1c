#include "nvem/nodal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "nvem/errors.hpp"

namespace nvem {

ElementCache ElementCache::build(const PolygonalMesh& mesh) {
  ElementCache cache;
  cache.geometry.reserve(mesh.element_count());
  cache.operators.reserve(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    cache.geometry.push_back(element_geometry(mesh, e));
    cache.operators.push_back(build_element_operators(cache.geometry.back()));
  }
  return cache;
}

namespace {

int patch_local_index(const std::vector<int>& patch_nodes, int global_node) {
  const auto it = std::lower_bound(patch_nodes.begin(), patch_nodes.end(), global_node);
  if (it == patch_nodes.end() || *it != global_node)
    throw std::logic_error("nodal_average: element dof " + std::to_string(global_node) +
                           " is not covered by the patch dof map");
  return static_cast<int>(it - patch_nodes.begin());
}

}  // namespace

Eigen::MatrixXd nodal_average(const PolygonalMesh& mesh, const NodalPatch& patch,
                              const std::function<Eigen::MatrixXd(int element)>& per_element) {
  const int p = static_cast<int>(patch.patch_nodes.size());
  Eigen::MatrixXd out;
  for (size_t k = 0; k < patch.elements.size(); ++k) {
    const int e = patch.elements[k];
    const double w = patch.weights[k];
    const auto& ring = mesh.elements[e];
    const int ne2 = 2 * static_cast<int>(ring.size());
    const Eigen::MatrixXd fe = per_element(e);

    const bool scatter_rows = fe.rows() == ne2;
    const bool scatter_cols = fe.cols() == ne2;
    const int out_rows = scatter_rows ? 2 * p : static_cast<int>(fe.rows());
    const int out_cols = scatter_cols ? 2 * p : static_cast<int>(fe.cols());
    if (out.size() == 0) out = Eigen::MatrixXd::Zero(out_rows, out_cols);
    if (out.rows() != out_rows || out.cols() != out_cols)
      throw std::logic_error("nodal_average: inconsistent element matrix shapes");

    std::vector<int> loc(ring.size());
    for (size_t a = 0; a < ring.size(); ++a) loc[a] = patch_local_index(patch.patch_nodes, ring[a]);

    if (scatter_rows && scatter_cols) {
      for (size_t a = 0; a < ring.size(); ++a)
        for (size_t b = 0; b < ring.size(); ++b)
          out.block<2, 2>(2 * loc[a], 2 * loc[b]) += w * fe.block<2, 2>(2 * a, 2 * b);
    } else if (scatter_cols) {
      for (size_t a = 0; a < ring.size(); ++a)
        out.middleCols<2>(2 * loc[a]) += w * fe.middleCols(2 * a, 2);
    } else if (scatter_rows) {
      for (size_t a = 0; a < ring.size(); ++a)
        out.middleRows<2>(2 * loc[a]) += w * fe.middleRows(2 * a, 2);
    } else {
      out += w * fe;
    }
  }
  return out;
}

NodalOperators build_nodal_operators(const PolygonalMesh& mesh, const NodalPatch& patch,
                                     const ElementCache& cache) {
  NodalOperators ops;
  ops.node = patch.node;
  ops.area = patch.area;
  ops.patch_nodes = patch.patch_nodes;

  ops.B_I = nodal_average(mesh, patch,
                          [&](int e) -> Eigen::MatrixXd { return cache.operators[e].B; });
  ops.IminusP_I = nodal_average(mesh, patch, [&](int e) -> Eigen::MatrixXd {
    const auto& P = cache.operators[e].P;
    return Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P;
  });
  const Vec2 x_node = mesh.nodes[patch.node];
  ops.PiPhi_I = nodal_average(mesh, patch, [&](int e) -> Eigen::MatrixXd {
    return projected_basis_at(cache.geometry[e], cache.operators[e], x_node);
  });
  ops.Nbar_I = nodal_average(mesh, patch, [&](int e) -> Eigen::MatrixXd {
    return averaging_matrix(static_cast<int>(mesh.elements[e].size()));
  });
  return ops;
}

Eigen::VectorXd nodal_stability_diagonal(const NodalOperators& ops,
                                         const ConstitutiveMatrix& D_stab) {
  const Eigen::MatrixXd t = ops.area * ops.B_I.transpose() * D_stab * ops.B_I;
  Eigen::VectorXd s(t.rows());
  for (int i = 0; i < t.rows(); ++i) s(i) = std::max(1.0, t(i, i));
  return s;
}

Eigen::MatrixXd nodal_stiffness(const NodalOperators& ops, const ConstitutiveMatrix& D,
                                const ConstitutiveMatrix* D_stab) {
  Eigen::MatrixXd k = ops.area * ops.B_I.transpose() * D * ops.B_I;
  if (D_stab) {
    const Eigen::VectorXd s = nodal_stability_diagonal(ops, *D_stab);
    k.noalias() += ops.IminusP_I.transpose() * s.asDiagonal() * ops.IminusP_I;
  }
  return k;
}

Eigen::VectorXd nodal_force_body(const PolygonalMesh& mesh, const NodalPatch& patch,
                                 const NodalOperators& ops,
                                 const std::function<Vec2(int element)>& b_hat) {
  Vec2 b_i = Vec2::Zero();
  for (size_t k = 0; k < patch.elements.size(); ++k)
    b_i += patch.weights[k] * b_hat(patch.elements[k]);
  return ops.area * ops.Nbar_I.transpose() * b_i;
}

Eigen::MatrixXd nodal_mass(const NodalOperators& ops, double rho) {
  return rho * ops.area *
         (ops.PiPhi_I.transpose() * ops.PiPhi_I + ops.IminusP_I.transpose() * ops.IminusP_I);
}

std::vector<NodalTractionForce> nodal_forces_traction(
    const std::vector<TaggedEdge>& edges, const std::function<Vec2(int edge_index)>& t_hat) {
  std::map<int, std::vector<int>> incident;  // node -> edge indices
  for (size_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].n0].push_back(static_cast<int>(i));
    incident[edges[i].n1].push_back(static_cast<int>(i));
  }

  std::vector<NodalTractionForce> out;
  out.reserve(incident.size());
  for (const auto& [node, edge_ids] : incident) {
    double area = 0.0;  // 1D nodal measure, sum |e|/2
    for (int i : edge_ids) area += 0.5 * edges[i].length;

    std::set<int> nodes;
    for (int i : edge_ids) {
      nodes.insert(edges[i].n0);
      nodes.insert(edges[i].n1);
    }
    NodalTractionForce f;
    f.node = node;
    f.patch_nodes.assign(nodes.begin(), nodes.end());
    const int p = static_cast<int>(f.patch_nodes.size());

    Eigen::MatrixXd nbar = Eigen::MatrixXd::Zero(2, 2 * p);
    Vec2 t_i = Vec2::Zero();
    for (int i : edge_ids) {
      const double w = 0.5 * edges[i].length / area;
      t_i += w * t_hat(i);
      for (int endpoint : {edges[i].n0, edges[i].n1}) {
        const int loc = patch_local_index(f.patch_nodes, endpoint);
        nbar(0, 2 * loc) += w * 0.5;
        nbar(1, 2 * loc + 1) += w * 0.5;
      }
    }
    f.force = area * nbar.transpose() * t_i;
    out.push_back(std::move(f));
  }
  return out;
}

NodalFields recover_nodal_fields(const PolygonalMesh& mesh, const std::vector<NodalPatch>& patches,
                                 const ElementCache& cache, const Eigen::VectorXd& displacement,
                                 const MaterialModel& material) {
  if (displacement.size() != mesh.dof_count())
    throw std::invalid_argument("recover_nodal_fields: displacement size mismatch");

  const ConstitutiveMatrix D = constitutive_matrix(material);
  const double lambda = material.lambda();
  const double nu = material.poisson;

  NodalFields fields;
  const int n = mesh.node_count();
  fields.strain.resize(n, 3);
  fields.stress.resize(n, 3);
  fields.pressure.resize(n);
  fields.von_mises.resize(n);

  for (const NodalPatch& patch : patches) {
    const Eigen::MatrixXd b_i = nodal_average(
        mesh, patch, [&](int e) -> Eigen::MatrixXd { return cache.operators[e].B; });
    Eigen::VectorXd d_patch(2 * patch.patch_nodes.size());
    for (size_t a = 0; a < patch.patch_nodes.size(); ++a)
      d_patch.segment<2>(2 * a) = displacement.segment<2>(2 * patch.patch_nodes[a]);

    const Eigen::Vector3d eps = b_i * d_patch;
    const Eigen::Vector3d sig = D * eps;
    fields.strain.row(patch.node) = eps;
    fields.stress.row(patch.node) = sig;
    fields.pressure(patch.node) = -lambda * (eps(0) + eps(1));

    const double s33 =
        material.condition == PlaneCondition::Stress ? 0.0 : nu * (sig(0) + sig(1));
    const double s11 = sig(0), s22 = sig(1), s12 = sig(2);
    fields.von_mises(patch.node) =
        std::sqrt(std::max(0.0, s11 * s11 + s22 * s22 + s33 * s33 - s11 * s22 - s11 * s33 -
                                    s22 * s33 + 3.0 * s12 * s12));
  }
  return fields;
}

}  // namespace nvem
