#pragma once

#include <Eigen/Core>

#include "nvem/material.hpp"
#include "nvem/mesh.hpp"

namespace nvem {

/// Element-level projection algebra. With N vertices the local dof vector is
/// (u_11, u_21, ..., u_1N, u_2N); B maps it to the element-average strain in
/// Voigt order, P projects onto the element's linear displacement fields.
struct ElementOperators {
  Eigen::Matrix<double, 3, Eigen::Dynamic> B;  // 3 x 2N, average strain per unit dof
  Eigen::Matrix<double, 2, Eigen::Dynamic> q;  // 2 x N, boundary-integral coefficients
  Eigen::MatrixXd H;                           // 2N x 3
  Eigen::MatrixXd G;                           // 2N x 3
  Eigen::Matrix<double, 3, Eigen::Dynamic> R;  // 3 x 2N
  Eigen::MatrixXd P;                           // 2N x 2N projection matrix

  int dof_count() const { return static_cast<int>(P.rows()); }
};

ElementOperators build_element_operators(const ElementGeometry& geom);

/// K_E = |E| B^T D B + (I-P)^T S (I-P) with the diagonal D-recipe stability
/// S_ii = max(1, (|E| B^T D_stab B)_ii).
Eigen::MatrixXd element_stiffness(const ElementGeometry& geom, const ElementOperators& ops,
                                  const ConstitutiveMatrix& D, const ConstitutiveMatrix& D_stab);

/// Consistency part only, |E| B^T D B.
Eigen::MatrixXd element_stiffness_consistency(const ElementGeometry& geom,
                                              const ElementOperators& ops,
                                              const ConstitutiveMatrix& D);

/// Body-force vector |E| Nbar^T b_hat; every node receives |E| b_hat / N.
Eigen::VectorXd element_force_body(const ElementGeometry& geom, const Vec2& b_hat);

/// Traction vector for one Neumann edge; each endpoint receives |e| t_hat / 2.
Eigen::Vector4d edge_force_traction(double edge_length, const Vec2& t_hat);

/// W(x) with rows linear in x such that W(x) d is the projected displacement
/// at x; stacking W at the vertices reproduces P.
Eigen::Matrix<double, 2, Eigen::Dynamic> projected_basis_at(const ElementGeometry& geom,
                                                            const ElementOperators& ops,
                                                            const Vec2& x);

/// rho (int_E W^T W dx + |E| (I-P)^T (I-P)). The consistency integral is
/// exact: the polygon is fanned from the vertex mean and a degree-2 rule is
/// applied per triangle (the integrand is quadratic). Throws GeometryError if
/// the polygon is not star-shaped with respect to the vertex mean.
Eigen::MatrixXd element_mass(const ElementGeometry& geom, const ElementOperators& ops,
                             double rho);

/// Nbar: 2 x 2N averaging matrix with 1/N I2 blocks.
Eigen::Matrix<double, 2, Eigen::Dynamic> averaging_matrix(int vertex_count);

}  // namespace nvem
