#include "nvem/studies.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace nvem {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::function<double(const Vec2&)> component(const ExactSolution& exact, int i) {
  return [=](const Vec2& x) { return exact.displacement(x)(i); };
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchmarkProblem make_patch_test(StructuredKind kind, int nx, int ny, std::uint64_t seed) {
  BenchmarkProblem p;
  p.name = "patch_test";
  p.material = MaterialModel::isotropic(1e7, 0.3, PlaneCondition::Strain);
  p.exact = patch_test_field(p.material.lambda());
  p.level_count = 1;
  p.mesh_at_level = [=](int) {
    return generate_structured(kind, nx, ny, Rect{0.0, 0.0, 1.0, 1.0}, 0.3, seed);
  };
  const ExactSolution exact = *p.exact;
  p.dirichlet = [exact](const PolygonalMesh& mesh) {
    DirichletMap bc;
    dirichlet_on_boundary(bc, mesh, exact.displacement);
    return bc;
  };
  p.loads = [](const PolygonalMesh&) { return LoadSpec{}; };
  return p;
}

BenchmarkProblem make_colliding_flow() {
  BenchmarkProblem p;
  p.name = "colliding_flow";
  p.material = MaterialModel::lame(5e7, 1.0);
  p.exact = colliding_flow_exact(1.0);
  p.level_count = 4;
  p.mesh_at_level = [](int level) {
    const int n = 8 << level;
    return generate_structured(StructuredKind::HexDominant, n, n, Rect{0.0, 0.0, 2.0, 2.0});
  };
  const ExactSolution exact = *p.exact;
  p.dirichlet = [exact](const PolygonalMesh& mesh) {
    DirichletMap bc;
    dirichlet_on_boundary(bc, mesh, exact.displacement);
    return bc;
  };
  p.loads = [](const PolygonalMesh&) { return LoadSpec{}; };
  return p;
}

BenchmarkProblem make_cantilever_beam(double nu) {
  constexpr double kLoad = -1000.0, kLength = 8.0, kHeight = 4.0;
  BenchmarkProblem p;
  p.name = "cantilever_beam";
  p.material = MaterialModel::isotropic(1e7, nu, PlaneCondition::Strain);
  p.exact = timoshenko_beam_exact(kLoad, kLength, kHeight, 1e7, nu);
  p.level_count = 4;
  p.mesh_at_level = [](int level) {
    const int m = 4 << level;
    return generate_structured(StructuredKind::HexDominant, 2 * m, m,
                               Rect{0.0, -2.0, 8.0, 2.0});
  };
  const ExactSolution exact = *p.exact;
  p.dirichlet = [exact](const PolygonalMesh& mesh) {
    DirichletMap bc;
    dirichlet_on_tag(bc, mesh, "left", component(exact, 0), component(exact, 1));
    return bc;
  };
  p.loads = [exact](const PolygonalMesh&) {
    LoadSpec loads;
    loads.tractions.push_back({"right", [exact](const Vec2& x) {
                                 const Eigen::Vector3d s = exact.stress(x);
                                 return Vec2(s(0), s(2));  // sigma . (1, 0)
                               }});
    return loads;
  };
  return p;
}

BenchmarkProblem make_cooks_membrane(const std::vector<std::string>& mesh_files) {
  BenchmarkProblem p;
  p.name = "cooks_membrane";
  p.material = MaterialModel::isotropic(250.0, 0.4999, PlaneCondition::Strain);
  p.level_count = static_cast<int>(mesh_files.size());
  p.mesh_at_level = [mesh_files](int level) {
    return load_mesh_file(mesh_files.at(static_cast<size_t>(level)));
  };
  p.dirichlet = [](const PolygonalMesh& mesh) {
    DirichletMap bc;
    const auto zero = [](const Vec2&) { return 0.0; };
    dirichlet_on_tag(bc, mesh, "left", zero, zero);
    return bc;
  };
  p.loads = [](const PolygonalMesh&) {
    LoadSpec loads;
    loads.tractions.push_back({"right", [](const Vec2&) { return Vec2(0.0, 6.25); }});
    return loads;
  };
  p.probe = Vec2(48.0, 60.0);
  return p;
}

PolygonalMesh plate_hole_mesh(int ns, int nt, double r0, double a, bool distorted,
                              std::uint64_t seed) {
  if (ns < 2 || ns % 2 != 0 || nt < 1)
    throw std::invalid_argument("plate_hole_mesh: ns must be even and >= 2, nt >= 1");

  PolygonalMesh mesh;
  auto id = [&](int s, int k) { return k * (ns + 1) + s; };
  for (int k = 0; k <= nt; ++k) {
    const double t = std::pow(static_cast<double>(k) / nt, 2.0);  // quadratic grading to the rim
    for (int s = 0; s <= ns; ++s) {
      const double th = 0.5 * kPi * s / ns;
      const Vec2 dir(std::cos(th), std::sin(th));
      const Vec2 inner = r0 * dir;
      const Vec2 outer = th <= 0.25 * kPi ? Vec2(a, a * std::tan(th))
                                          : Vec2(a * std::tan(0.5 * kPi - th), a);
      mesh.nodes.push_back(inner + t * (outer - inner));
    }
  }

  if (distorted) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    for (int k = 1; k < nt; ++k)
      for (int s = 1; s < ns; ++s) {
        const Vec2& here = mesh.nodes[id(s, k)];
        const double scale =
            0.25 * std::min({(mesh.nodes[id(s + 1, k)] - here).norm(),
                             (mesh.nodes[id(s - 1, k)] - here).norm(),
                             (mesh.nodes[id(s, k + 1)] - here).norm(),
                             (mesh.nodes[id(s, k - 1)] - here).norm()});
        mesh.nodes[id(s, k)] += scale * Vec2(unit(), unit());
      }
  }

  for (int k = 0; k < nt; ++k)
    for (int s = 0; s < ns; ++s) {
      mesh.elements.push_back({id(s, k), id(s, k + 1), id(s + 1, k + 1), id(s + 1, k)});
      const int e = mesh.element_count() - 1;
      if (s == 0) mesh.boundary.push_back({"bottom", e, 0});
      if (k == nt - 1) mesh.boundary.push_back({s < ns / 2 ? "right" : "top", e, 1});
      if (s == ns - 1) mesh.boundary.push_back({"left", e, 2});
      if (k == 0) mesh.boundary.push_back({"rim", e, 3});
    }
  return mesh;
}

BenchmarkProblem make_plate_with_hole(bool plane_stress, bool distorted) {
  constexpr double kT = 100.0, kR0 = 1.0, kA = 5.0, kYoung = 1e3;
  const double nu = plane_stress ? 0.3 : 0.499999;

  BenchmarkProblem p;
  p.name = plane_stress ? "plate_hole_stress" : "plate_hole_strain";
  p.material = MaterialModel::isotropic(
      kYoung, nu, plane_stress ? PlaneCondition::Stress : PlaneCondition::Strain);
  const double kappa = plane_stress ? kappa_plane_stress(nu) : kappa_plane_strain(nu);
  p.exact = plate_hole_exact(kT, kR0, kYoung, nu, kappa, plane_stress, p.material.lambda());
  p.level_count = 4;
  p.mesh_at_level = [distorted](int level) {
    return plate_hole_mesh(8 << level, 4 << level, kR0, kA, distorted);
  };
  p.dirichlet = [](const PolygonalMesh& mesh) {
    DirichletMap bc;
    const auto zero = [](const Vec2&) { return 0.0; };
    dirichlet_on_tag(bc, mesh, "bottom", std::nullopt, zero);  // u2 = 0 on y = 0
    dirichlet_on_tag(bc, mesh, "left", zero, std::nullopt);    // u1 = 0 on x = 0
    return bc;
  };
  const ExactSolution exact = *p.exact;
  p.loads = [exact](const PolygonalMesh&) {
    LoadSpec loads;
    loads.tractions.push_back({"right", [exact](const Vec2& x) {
                                 const Eigen::Vector3d s = exact.stress(x);
                                 return Vec2(s(0), s(2));
                               }});
    loads.tractions.push_back({"top", [exact](const Vec2& x) {
                                 const Eigen::Vector3d s = exact.stress(x);
                                 return Vec2(s(2), s(1));
                               }});
    return loads;
  };
  return p;
}

SolvedProblem solve_benchmark(const BenchmarkProblem& problem, const PolygonalMesh& mesh,
                              Method method, Stabilization stab, const WarningSink& warn) {
  SolvedProblem out;
  auto t0 = std::chrono::steady_clock::now();
  const GlobalSystem system =
      assemble(mesh, method, problem.material, stab, problem.loads(mesh), {}, warn);
  const ReducedSystem reduced = apply_dirichlet(system, problem.dirichlet(mesh));
  out.assemble_seconds = elapsed_seconds(t0);

  t0 = std::chrono::steady_clock::now();
  out.solution = solve_static(reduced);
  out.solve_seconds = elapsed_seconds(t0);

  const ElementCache cache = ElementCache::build(mesh);
  out.fields = recover_nodal_fields(mesh, build_patches(mesh), cache, out.solution.displacement,
                                    problem.material);
  if (problem.exact)
    out.report = error_norms(mesh, method, out.solution.displacement, *problem.exact,
                             problem.material);
  return out;
}

ErrorReport run_patch_test(const PolygonalMesh& mesh, Method method, Stabilization stab) {
  BenchmarkProblem p = make_patch_test(StructuredKind::Quad);
  return *solve_benchmark(p, mesh, method, stab).report;
}

namespace {

double fit_rate(const std::vector<double>& hs, const std::vector<double>& errs) {
  // Least-squares slope of log(err) against log(h).
  const int n = static_cast<int>(hs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(std::max(errs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

StudyResult convergence_study(const BenchmarkProblem& problem,
                              const std::vector<MethodSpec>& specs) {
  if (problem.level_count < 3)
    throw std::invalid_argument("convergence_study: at least 3 mesh levels are required");

  std::vector<PolygonalMesh> meshes;
  meshes.reserve(problem.level_count);
  std::vector<double> hs;
  for (int level = 0; level < problem.level_count; ++level) {
    meshes.push_back(problem.mesh_at_level(level));
    hs.push_back(mesh_size(meshes.back()));
    if (level > 0 && hs[level] >= hs[level - 1])
      throw std::invalid_argument("convergence_study: mesh sizes must decrease monotonically");
  }

  StudyResult result;
  result.problem = problem.name;
  for (const MethodSpec& spec : specs) {
    MethodStudy study;
    study.spec = spec;
    std::vector<double> l2s, h1s, lps;
    for (int level = 0; level < problem.level_count; ++level) {
      const SolvedProblem solved = solve_benchmark(problem, meshes[level], spec.method, spec.stab);
      if (!solved.report)
        throw std::invalid_argument("convergence_study: problem has no exact solution");
      study.levels.push_back(*solved.report);
      l2s.push_back(solved.report->l2_u);
      h1s.push_back(solved.report->h1_u);
      lps.push_back(solved.report->l2_p);
    }
    study.rate_l2 = fit_rate(hs, l2s);
    study.rate_h1 = fit_rate(hs, h1s);
    study.rate_lp = fit_rate(hs, lps);
    result.methods.push_back(std::move(study));
  }
  return result;
}

CookStudy cooks_membrane_study(const BenchmarkProblem& problem,
                               const std::vector<MethodSpec>& specs) {
  CookStudy out;
  out.specs = specs;
  out.tip_uy.resize(specs.size());

  for (int level = 0; level < problem.level_count; ++level) {
    const PolygonalMesh mesh = problem.mesh_at_level(level);
    out.dofs.push_back(mesh.dof_count());

    const GlobalSystem probe_sys = assemble(mesh, Method::Vem, problem.material,
                                            Stabilization::Plain, problem.loads(mesh));
    double fy = 0.0;
    for (int i = 0; i < probe_sys.F.size(); i += 2) fy += probe_sys.F(i + 1);
    out.applied_force.push_back(fy);

    const int tip = nearest_node(mesh, problem.probe);
    for (size_t s = 0; s < specs.size(); ++s) {
      const SolvedProblem solved = solve_benchmark(problem, mesh, specs[s].method, specs[s].stab);
      out.tip_uy[s].push_back(solved.solution.displacement(2 * tip + 1));
    }
  }
  return out;
}

}  // namespace nvem
