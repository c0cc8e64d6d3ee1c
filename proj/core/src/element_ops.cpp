#include "nvem/element_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvem/errors.hpp"

namespace nvem {

ElementOperators build_element_operators(const ElementGeometry& geom) {
  const int n = geom.vertex_count();
  ElementOperators ops;

  // q_ia = (|e_{a-1}| n_{i(a-1)} + |e_a| n_{ia}) / (2|E|); edge a starts at
  // vertex a, so edge a-1 is the edge preceding vertex a.
  ops.q.resize(2, n);
  for (int a = 0; a < n; ++a) {
    const int prev = (a + n - 1) % n;
    ops.q.col(a) = (geom.edge_lengths[prev] * geom.edge_normals[prev] +
                    geom.edge_lengths[a] * geom.edge_normals[a]) /
                   (2.0 * geom.area);
  }

  ops.B.setZero(3, 2 * n);
  ops.H.setZero(2 * n, 3);
  ops.G.setZero(2 * n, 3);
  ops.R.setZero(3, 2 * n);
  const double inv_n = 1.0 / n;
  for (int a = 0; a < n; ++a) {
    const double q1 = ops.q(0, a), q2 = ops.q(1, a);
    ops.B(0, 2 * a) = q1;
    ops.B(1, 2 * a + 1) = q2;
    ops.B(2, 2 * a) = q2;
    ops.B(2, 2 * a + 1) = q1;

    const Vec2 d = geom.vertices[a] - geom.centroid;
    ops.H.row(2 * a) << d.x(), 0.0, 0.5 * d.y();
    ops.H.row(2 * a + 1) << 0.0, d.y(), 0.5 * d.x();
    ops.G.row(2 * a) << 1.0, 0.0, 0.5 * d.y();
    ops.G.row(2 * a + 1) << 0.0, 1.0, -0.5 * d.x();

    ops.R(0, 2 * a) = inv_n;
    ops.R(1, 2 * a + 1) = inv_n;
    ops.R(2, 2 * a) = q2;
    ops.R(2, 2 * a + 1) = -q1;
  }

  ops.P = ops.H * ops.B + ops.G * ops.R;
  return ops;
}

Eigen::MatrixXd element_stiffness_consistency(const ElementGeometry& geom,
                                              const ElementOperators& ops,
                                              const ConstitutiveMatrix& D) {
  return geom.area * ops.B.transpose() * D * ops.B;
}

Eigen::MatrixXd element_stiffness(const ElementGeometry& geom, const ElementOperators& ops,
                                  const ConstitutiveMatrix& D, const ConstitutiveMatrix& D_stab) {
  const int m = ops.dof_count();
  const Eigen::MatrixXd Kc = element_stiffness_consistency(geom, ops, D);
  const Eigen::MatrixXd Tc = geom.area * ops.B.transpose() * D_stab * ops.B;
  Eigen::VectorXd s(m);
  for (int i = 0; i < m; ++i) s(i) = std::max(1.0, Tc(i, i));
  const Eigen::MatrixXd IP = Eigen::MatrixXd::Identity(m, m) - ops.P;
  return Kc + IP.transpose() * s.asDiagonal() * IP;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> averaging_matrix(int vertex_count) {
  Eigen::Matrix<double, 2, Eigen::Dynamic> nbar;
  nbar.setZero(2, 2 * vertex_count);
  const double inv_n = 1.0 / vertex_count;
  for (int a = 0; a < vertex_count; ++a) {
    nbar(0, 2 * a) = inv_n;
    nbar(1, 2 * a + 1) = inv_n;
  }
  return nbar;
}

Eigen::VectorXd element_force_body(const ElementGeometry& geom, const Vec2& b_hat) {
  const int n = geom.vertex_count();
  Eigen::VectorXd f(2 * n);
  const Vec2 share = geom.area * b_hat / n;
  for (int a = 0; a < n; ++a) f.segment<2>(2 * a) = share;
  return f;
}

Eigen::Vector4d edge_force_traction(double edge_length, const Vec2& t_hat) {
  Eigen::Vector4d f;
  const Vec2 share = 0.5 * edge_length * t_hat;
  f << share, share;
  return f;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> projected_basis_at(const ElementGeometry& geom,
                                                            const ElementOperators& ops,
                                                            const Vec2& x) {
  const Vec2 d = x - geom.centroid;
  Eigen::Matrix<double, 2, 3> h, g;
  h << d.x(), 0.0, 0.5 * d.y(),  //
      0.0, d.y(), 0.5 * d.x();
  g << 1.0, 0.0, 0.5 * d.y(),  //
      0.0, 1.0, -0.5 * d.x();
  return h * ops.B + g * ops.R;
}

Eigen::MatrixXd element_mass(const ElementGeometry& geom, const ElementOperators& ops,
                             double rho) {
  const int n = geom.vertex_count();
  const int m = 2 * n;
  Eigen::MatrixXd consistency = Eigen::MatrixXd::Zero(m, m);

  for (int a = 0; a < n; ++a) {
    const Vec2& p1 = geom.centroid;
    const Vec2& p2 = geom.vertices[a];
    const Vec2& p3 = geom.vertices[(a + 1) % n];
    const double tri_area =
        0.5 * ((p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y()));
    if (tri_area <= 0.0)
      throw GeometryError(
          "element_mass: polygon is not star-shaped with respect to its vertex mean "
          "(fan triangle " +
          std::to_string(a) + " has non-positive area); an ear-clipping fallback is required");
    // Mid-edge rule, exact for quadratics.
    const Vec2 mids[3] = {0.5 * (p1 + p2), 0.5 * (p2 + p3), 0.5 * (p3 + p1)};
    for (const Vec2& x : mids) {
      const auto W = projected_basis_at(geom, ops, x);
      consistency.noalias() += (tri_area / 3.0) * W.transpose() * W;
    }
  }

  const Eigen::MatrixXd IP = Eigen::MatrixXd::Identity(m, m) - ops.P;
  return rho * (consistency + geom.area * IP.transpose() * IP);
}

}  // namespace nvem
