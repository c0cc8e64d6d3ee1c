#pragma once

#include <Eigen/Core>

#include "nvem/assembly.hpp"
#include "nvem/exact_solutions.hpp"
#include "nvem/material.hpp"
#include "nvem/mesh.hpp"
#include "nvem/nodal_ops.hpp"

namespace nvem {

struct ErrorReport {
  double l2_u = 0.0;  // relative L2 displacement norm
  double h1_u = 0.0;  // relative H1 (energy) seminorm
  double l2_p = 0.0;  // relative L2 pressure norm
  int dofs = 0;
  double h = 0.0;  // max element diameter
};

/// Relative error norms of a solved displacement field against an exact
/// solution. NVEM: nodal sums weighted by |I| with the recovered nodal strain
/// and p_I = -lambda tr(eps_I). VEM: element cubature (degree-4 rule on the
/// vertex-mean fan) of u - Pi u_h and of the element-average strain errors.
ErrorReport error_norms(const PolygonalMesh& mesh, Method method,
                        const Eigen::VectorXd& displacement, const ExactSolution& exact,
                        const MaterialModel& material);

}  // namespace nvem
