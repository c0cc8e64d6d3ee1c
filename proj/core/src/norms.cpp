#include "nvem/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "nvem/errors.hpp"

namespace nvem {

namespace {

struct Accumulator {
  double err = 0.0, ref = 0.0;
  void add(double e2, double r2, double w) {
    err += e2 * w;
    ref += r2 * w;
  }
  double relative() const { return ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err); }
};

// Dunavant degree-4 rule, 6 points per triangle.
struct TriRule {
  double l1, l2, w;
};
constexpr TriRule kDeg4[6] = {
    {0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.109951743655322},
};

}  // namespace

ErrorReport error_norms(const PolygonalMesh& mesh, Method method,
                        const Eigen::VectorXd& displacement, const ExactSolution& exact,
                        const MaterialModel& material) {
  if (!exact.displacement || !exact.strain || !exact.pressure)
    throw std::invalid_argument("error_norms: exact solution lacks u/strain/pressure handles");
  if (displacement.size() != mesh.dof_count())
    throw std::invalid_argument("error_norms: displacement size mismatch");

  const ConstitutiveMatrix D = constitutive_matrix(material);
  const double lambda = material.lambda();
  const ElementCache cache = ElementCache::build(mesh);

  ErrorReport report;
  report.dofs = mesh.dof_count();
  report.h = mesh_size(mesh);

  Accumulator l2, h1, lp;

  if (method == Method::Nvem) {
    const std::vector<NodalPatch> patches = build_patches(mesh);
    const NodalFields fields = recover_nodal_fields(mesh, patches, cache, displacement, material);
    for (const NodalPatch& patch : patches) {
      const Vec2& x = mesh.nodes[patch.node];
      const double w = patch.area;

      const Vec2 ue = exact.displacement(x);
      const Vec2 uh = displacement.segment<2>(2 * patch.node);
      l2.add((ue - uh).squaredNorm(), ue.squaredNorm(), w);

      const Eigen::Vector3d ee = exact.strain(x);
      const Eigen::Vector3d eh = fields.strain.row(patch.node);
      const Eigen::Vector3d de = ee - eh;
      h1.add(de.dot(D * de), ee.dot(D * ee), w);

      const double pe = exact.pressure(x);
      const double ph = fields.pressure(patch.node);
      lp.add((pe - ph) * (pe - ph), pe * pe, w);
    }
  } else {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const auto& geom = cache.geometry[e];
      const auto& ops = cache.operators[e];
      const auto& ring = mesh.elements[e];
      Eigen::VectorXd d_e(2 * ring.size());
      for (size_t a = 0; a < ring.size(); ++a)
        d_e.segment<2>(2 * a) = displacement.segment<2>(2 * ring[a]);

      const Eigen::Vector3d eps_h = ops.B * d_e;
      const double p_h = -lambda * (eps_h(0) + eps_h(1));

      const int n = geom.vertex_count();
      for (int a = 0; a < n; ++a) {
        const Vec2& p1 = geom.centroid;
        const Vec2& p2 = geom.vertices[a];
        const Vec2& p3 = geom.vertices[(a + 1) % n];
        const double tri =
            0.5 * ((p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y()));
        if (tri <= 0.0)
          throw GeometryError(
              "error_norms: polygon is not star-shaped with respect to its vertex mean; an "
              "ear-clipping fallback is required");
        for (const TriRule& r : kDeg4) {
          const Vec2 x = p1 + r.l1 * (p2 - p1) + r.l2 * (p3 - p1);
          const double w = r.w * tri;

          const Vec2 ue = exact.displacement(x);
          const Vec2 uh = projected_basis_at(geom, ops, x) * d_e;
          l2.add((ue - uh).squaredNorm(), ue.squaredNorm(), w);

          const Eigen::Vector3d ee = exact.strain(x);
          const Eigen::Vector3d de = ee - eps_h;
          h1.add(de.dot(D * de), ee.dot(D * ee), w);

          const double pe = exact.pressure(x);
          lp.add((pe - p_h) * (pe - p_h), pe * pe, w);
        }
      }
    }
  }

  report.l2_u = l2.relative();
  report.h1_u = h1.relative();
  report.l2_p = lp.relative();
  return report;
}

}  // namespace nvem
