#include "nvem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "nvem/errors.hpp"

namespace nvem {

std::string to_string(Method m) { return m == Method::Vem ? "vem" : "nvem"; }

std::string to_string(Stabilization s) {
  switch (s) {
    case Stabilization::Plain: return "plain";
    case Stabilization::Dtilde: return "dtilde";
    case Stabilization::DmuFull: return "dmu-full";
    case Stabilization::DmuShear: return "dmu-shear";
  }
  return "?";
}

std::optional<ConstitutiveMatrix> stabilization_matrix(Method method, Stabilization stab,
                                                       const MaterialModel& material) {
  switch (stab) {
    case Stabilization::Plain:
      if (method == Method::Nvem) return std::nullopt;  // deliberately unstabilized
      return constitutive_matrix(material);
    case Stabilization::Dtilde: return modified_dtilde(material);
    case Stabilization::DmuFull: return dmu(material, DmuVariant::Full);
    case Stabilization::DmuShear: return dmu(material, DmuVariant::ShearOnly);
  }
  return std::nullopt;
}

namespace {

// Edge average by 2-point Gauss (exact through cubics).
Vec2 edge_average(const std::function<Vec2(const Vec2&)>& f, const Vec2& p0, const Vec2& p1) {
  const Vec2 mid = 0.5 * (p0 + p1);
  const Vec2 half = 0.5 * (p1 - p0) / std::sqrt(3.0);
  return 0.5 * (f(mid - half) + f(mid + half));
}

void check_connectivity(const PolygonalMesh& mesh, const WarningSink& warn) {
  if (!warn || mesh.node_count() == 0) return;
  std::vector<int> parent(mesh.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& ring : mesh.elements)
    for (size_t a = 1; a < ring.size(); ++a) parent[find(ring[a])] = find(ring[0]);
  std::set<int> roots;
  for (int i = 0; i < mesh.node_count(); ++i) roots.insert(find(i));
  if (roots.size() > 1)
    warn("mesh has " + std::to_string(roots.size()) +
         " connected components; expect nullity > 3");
}

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter_dense(Triplets& out, const Eigen::MatrixXd& local, const std::vector<int>& nodes) {
  const int n = static_cast<int>(nodes.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          out.emplace_back(2 * nodes[a] + i, 2 * nodes[b] + j, local(2 * a + i, 2 * b + j));
}

struct EdgeLoad {
  TaggedEdge edge;
  Vec2 t_hat = Vec2::Zero();
};

std::vector<EdgeLoad> collect_edge_loads(const PolygonalMesh& mesh, const LoadSpec& loads) {
  std::vector<EdgeLoad> out;
  for (const auto& tl : loads.tractions) {
    for (const TaggedEdge& edge : boundary_edges(mesh, tl.tag)) {
      EdgeLoad el;
      el.edge = edge;
      el.t_hat = edge_average(tl.traction, mesh.nodes[edge.n0], mesh.nodes[edge.n1]);
      out.push_back(el);
    }
  }
  return out;
}

void add_forces(Eigen::VectorXd& F, const PolygonalMesh& mesh, Method method,
                const MaterialModel& material, const LoadSpec& loads, const ElementCache& cache,
                const std::vector<NodalPatch>* patches) {
  const double t = material.thickness;

  if (loads.body) {
    if (method == Method::Vem) {
      for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& g = cache.geometry[e];
        const Eigen::VectorXd fe = t * element_force_body(g, loads.body(g.centroid));
        const auto& ring = mesh.elements[e];
        for (size_t a = 0; a < ring.size(); ++a)
          F.segment<2>(2 * ring[a]) += fe.segment<2>(2 * a);
      }
    } else {
      for (const NodalPatch& patch : *patches) {
        const NodalOperators ops = build_nodal_operators(mesh, patch, cache);
        const Eigen::VectorXd fi = t * nodal_force_body(mesh, patch, ops, [&](int e) {
          return loads.body(cache.geometry[e].centroid);
        });
        for (size_t a = 0; a < patch.patch_nodes.size(); ++a)
          F.segment<2>(2 * patch.patch_nodes[a]) += fi.segment<2>(2 * a);
      }
    }
  }

  const std::vector<EdgeLoad> edge_loads = collect_edge_loads(mesh, loads);
  if (!edge_loads.empty()) {
    if (method == Method::Vem) {
      for (const EdgeLoad& el : edge_loads) {
        const Eigen::Vector4d fe = t * edge_force_traction(el.edge.length, el.t_hat);
        F.segment<2>(2 * el.edge.n0) += fe.head<2>();
        F.segment<2>(2 * el.edge.n1) += fe.tail<2>();
      }
    } else {
      std::vector<TaggedEdge> edges(edge_loads.size());
      for (size_t i = 0; i < edge_loads.size(); ++i) edges[i] = edge_loads[i].edge;
      const auto nodal = nodal_forces_traction(
          edges, [&](int i) { return edge_loads[static_cast<size_t>(i)].t_hat; });
      for (const auto& nf : nodal)
        for (size_t a = 0; a < nf.patch_nodes.size(); ++a)
          F.segment<2>(2 * nf.patch_nodes[a]) += t * nf.force.segment<2>(2 * a);
    }
  }

  for (const PointLoad& pl : loads.point_loads)
    F.segment<2>(2 * nearest_node(mesh, pl.at)) += pl.force;  // true force, no thickness scaling
}

}  // namespace

GlobalSystem assemble(const PolygonalMesh& mesh, Method method, const MaterialModel& material,
                      Stabilization stab, const LoadSpec& loads, const AssembleOptions& opts,
                      const WarningSink& warn) {
  material.validate();
  check_connectivity(mesh, warn);
  if (method == Method::Nvem && stab == Stabilization::Plain && warn)
    warn("unstabilized NVEM (stab=plain) is non-convergent; intended for diagnostics only");

  const ConstitutiveMatrix D = constitutive_matrix(material);
  const std::optional<ConstitutiveMatrix> D_stab = stabilization_matrix(method, stab, material);
  const double t = material.thickness;
  const ElementCache cache = ElementCache::build(mesh);

  GlobalSystem sys;
  sys.method = method;
  sys.node_count = mesh.node_count();
  const int dofs = mesh.dof_count();
  sys.F = Eigen::VectorXd::Zero(dofs);

  Triplets kt, mt;
  std::vector<NodalPatch> patches;

  if (method == Method::Vem) {
    for (int e = 0; e < mesh.element_count(); ++e) {
      const Eigen::MatrixXd ke =
          t * element_stiffness(cache.geometry[e], cache.operators[e], D, *D_stab);
      scatter_dense(kt, ke, mesh.elements[e]);
      if (opts.with_mass) {
        const Eigen::MatrixXd me =
            t * element_mass(cache.geometry[e], cache.operators[e], material.density);
        scatter_dense(mt, me, mesh.elements[e]);
      }
    }
  } else {
    patches = build_patches(mesh);
    for (const NodalPatch& patch : patches) {
      const NodalOperators ops = build_nodal_operators(mesh, patch, cache);
      const Eigen::MatrixXd ki = t * nodal_stiffness(ops, D, D_stab ? &*D_stab : nullptr);
      scatter_dense(kt, ki, patch.patch_nodes);
      if (opts.with_mass) {
        const Eigen::MatrixXd mi = t * nodal_mass(ops, material.density);
        scatter_dense(mt, mi, patch.patch_nodes);
      }
    }
  }

  sys.K.resize(dofs, dofs);
  sys.K.setFromTriplets(kt.begin(), kt.end());
  if (opts.with_mass) {
    sys.M.emplace(dofs, dofs);
    sys.M->setFromTriplets(mt.begin(), mt.end());
  }

  add_forces(sys.F, mesh, method, material, loads, cache,
             method == Method::Nvem ? &patches : nullptr);
  return sys;
}

Eigen::VectorXd assemble_force_vector(const PolygonalMesh& mesh, Method method,
                                      const MaterialModel& material, const LoadSpec& loads) {
  const ElementCache cache = ElementCache::build(mesh);
  std::vector<NodalPatch> patches;
  if (method == Method::Nvem) patches = build_patches(mesh);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.dof_count());
  add_forces(F, mesh, method, material, loads, cache,
             method == Method::Nvem ? &patches : nullptr);
  return F;
}

void dirichlet_on_tag(DirichletMap& bc, const PolygonalMesh& mesh, const std::string& tag,
                      const std::optional<std::function<double(const Vec2&)>>& ux,
                      const std::optional<std::function<double(const Vec2&)>>& uy) {
  for (const TaggedEdge& edge : boundary_edges(mesh, tag)) {
    for (int node : {edge.n0, edge.n1}) {
      const Vec2& x = mesh.nodes[node];
      if (ux) bc[2 * node] = (*ux)(x);
      if (uy) bc[2 * node + 1] = (*uy)(x);
    }
  }
}

void dirichlet_on_boundary(DirichletMap& bc, const PolygonalMesh& mesh,
                           const std::function<Vec2(const Vec2&)>& u) {
  for (int node : boundary_node_set(mesh)) {
    const Vec2 v = u(mesh.nodes[node]);
    bc[2 * node] = v.x();
    bc[2 * node + 1] = v.y();
  }
}

Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd full = prescribed;
  for (size_t i = 0; i < free_dofs.size(); ++i) full(free_dofs[i]) = reduced(i);
  return full;
}

Eigen::VectorXd ReducedSystem::reduce_vector(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(free_dofs.size());
  for (size_t i = 0; i < free_dofs.size(); ++i) out(i) = full(free_dofs[i]);
  return out;
}

Eigen::SparseMatrix<double> ReducedSystem::reduce_matrix(
    const Eigen::SparseMatrix<double>& full) const {
  Triplets t;
  for (int col = 0; col < full.outerSize(); ++col) {
    const int jc = full_to_free[col];
    if (jc < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, col); it; ++it) {
      const int ir = full_to_free[it.row()];
      if (ir >= 0) t.emplace_back(ir, jc, it.value());
    }
  }
  Eigen::SparseMatrix<double> out(free_dofs.size(), free_dofs.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

ReducedSystem apply_dirichlet(const GlobalSystem& system, const DirichletMap& bc) {
  const int n = static_cast<int>(system.K.rows());
  ReducedSystem red;
  red.full_size = n;
  red.full_to_free.assign(n, -1);
  red.prescribed = Eigen::VectorXd::Zero(n);
  for (const auto& [dof, value] : bc) {
    if (dof < 0 || dof >= n) throw std::invalid_argument("dirichlet dof out of range");
    red.prescribed(dof) = value;
  }
  for (int i = 0; i < n; ++i) {
    if (!bc.count(i)) {
      red.full_to_free[i] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(i);
    }
  }

  red.K = red.reduce_matrix(system.K);
  red.bc_correction = Eigen::VectorXd::Zero(red.free_dofs.size());
  for (int col = 0; col < system.K.outerSize(); ++col) {
    const auto it_bc = bc.find(col);
    if (it_bc == bc.end() || it_bc->second == 0.0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
      const int ir = red.full_to_free[it.row()];
      if (ir >= 0) red.bc_correction(ir) -= it.value() * it_bc->second;
    }
  }
  red.F = red.reduce_vector(system.F) + red.bc_correction;
  return red;
}

StaticSolution solve_static(const ReducedSystem& system) {
  StaticSolution sol;
  if (system.free_dofs.empty()) {
    sol.displacement = system.prescribed;
    return sol;
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.K);
  if (ldlt.info() != Eigen::Success) {
    std::string diag;
    if (system.K.rows() <= 2000) {
      const Eigen::MatrixXd dense = Eigen::MatrixXd(system.K);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
      const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
      const int nullity =
          static_cast<int>((es.eigenvalues().array().abs() <= 1e-12 * lmax).count());
      diag = "; nullspace dimension ~ " + std::to_string(nullity);
    }
    throw NumericalError("solve_static: factorization failed (singular system" + diag + ")");
  }

  Eigen::VectorXd x = ldlt.solve(system.F);
  const double fn = std::max(system.F.norm(), 1e-300);
  double res = (system.K * x - system.F).norm() / fn;
  if (res > 1e-12) {  // one refinement pass
    x += ldlt.solve(system.F - system.K * x);
    res = (system.K * x - system.F).norm() / fn;
  }
  sol.residual = res;
  sol.displacement = system.expand(x);
  return sol;
}

namespace {

EigenSpectrum dense_spectrum(const Eigen::SparseMatrix<double>& K, int k,
                             const Eigen::SparseMatrix<double>* M) {
  const Eigen::MatrixXd kd = Eigen::MatrixXd(K);
  EigenSpectrum out;
  if (M) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, Eigen::MatrixXd(*M));
    out.values = es.eigenvalues().head(k);
    out.modes = es.eigenvectors().leftCols(k);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kd);
    out.values = es.eigenvalues().head(k);
    out.modes = es.eigenvectors().leftCols(k);
  }
  return out;
}

EigenSpectrum shift_invert_spectrum(const Eigen::SparseMatrix<double>& K, int k,
                                    const Eigen::SparseMatrix<double>* M) {
  const int n = static_cast<int>(K.rows());
  const int m = std::min(n, k + 8);

  double dmax = 0.0;
  for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(K.coeff(i, i)));
  Eigen::SparseMatrix<double> ident(n, n);
  ident.setIdentity();
  const Eigen::SparseMatrix<double> shifted = M ? K + (1e-8 * dmax) * (*M) : K + (1e-8 * dmax) * ident;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("eigen_spectrum: shift-invert factorization failed");

  std::mt19937_64 rng(0x5eed5eedULL);
  Eigen::MatrixXd x(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      x(i, j) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;

  for (int iter = 0; iter < 80; ++iter) {
    Eigen::MatrixXd y = M ? ldlt.solve((*M * x).eval()) : ldlt.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    x = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  }

  const Eigen::MatrixXd kr = x.transpose() * K * x;
  const Eigen::MatrixXd mr = M ? (x.transpose() * *M * x).eval()
                               : (x.transpose() * x).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kr, mr);
  EigenSpectrum out;
  out.values = es.eigenvalues().head(k);
  out.modes = x * es.eigenvectors().leftCols(k);
  return out;
}

}  // namespace

EigenSpectrum eigen_spectrum(const Eigen::SparseMatrix<double>& K, int k,
                             const Eigen::SparseMatrix<double>* M, int dense_threshold) {
  if (k < 1 || k > K.rows())
    throw std::invalid_argument("eigen_spectrum: k must lie in [1, dof count]");
  if (K.rows() <= dense_threshold) return dense_spectrum(K, k, M);
  return shift_invert_spectrum(K, k, M);
}

Eigen::SparseMatrix<double> rayleigh_damping(const Eigen::SparseMatrix<double>& M,
                                             const Eigen::SparseMatrix<double>& K, double q1,
                                             double q2) {
  if (M.rows() != K.rows() || M.cols() != K.cols())
    throw std::invalid_argument("rayleigh_damping: M and K dimensions differ");
  return q1 * M + q2 * K;
}

}  // namespace nvem
