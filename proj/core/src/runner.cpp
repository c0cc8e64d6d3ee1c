#include "nvem/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "nvem/dynamics.hpp"
#include "nvem/errors.hpp"
#include "nvem/studies.hpp"
#include "nvem/vtk.hpp"

namespace nvem {

namespace {

namespace fs = std::filesystem;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StructuredKind parse_kind(const std::string& kind) {
  if (kind == "quad") return StructuredKind::Quad;
  if (kind == "distorted-quad") return StructuredKind::DistortedQuad;
  if (kind == "hex") return StructuredKind::HexDominant;
  throw ParseError("unknown mesh kind '" + kind + "' (valid: quad, distorted-quad, hex, file)");
}

PolygonalMesh mesh_from_config(const RunConfig& rc, const Rect& fallback_domain,
                               std::vector<std::string>* warnings) {
  const WarningSink warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  if (rc.mesh_kind == "file") {
    if (rc.mesh_file.empty()) throw ParseError("[mesh] kind = file requires a 'file' key");
    return load_mesh_file(rc.mesh_file, warn);
  }
  const Rect domain = rc.domain_set ? rc.domain : fallback_domain;
  return generate_structured(parse_kind(rc.mesh_kind), rc.nx, rc.ny, domain, rc.distortion,
                             rc.seed);
}

struct ProblemSetup {
  BenchmarkProblem problem;
  PolygonalMesh mesh;
  Rect default_domain{0.0, 0.0, 1.0, 1.0};
  std::string mesh_source;
};

ProblemSetup build_setup(const RunConfig& rc, std::vector<std::string>* warnings) {
  ProblemSetup setup;

  if (rc.problem == "patch_test") {
    setup.problem = make_patch_test(parse_kind(rc.mesh_kind == "file" ? "quad" : rc.mesh_kind),
                                    rc.nx, rc.ny, rc.seed);
  } else if (rc.problem == "colliding_flow") {
    setup.problem = make_colliding_flow();
    setup.default_domain = Rect{0.0, 0.0, 2.0, 2.0};
  } else if (rc.problem == "beam") {
    setup.problem = make_cantilever_beam(rc.material ? rc.material->poisson : 0.3);
    setup.default_domain = Rect{0.0, -2.0, 8.0, 2.0};
  } else if (rc.problem == "cook") {
    if (rc.mesh_files.empty()) throw ParseError("problem cook requires [mesh] files = ...");
    setup.problem = make_cooks_membrane(rc.mesh_files);
  } else if (rc.problem == "plate_hole") {
    const bool plane_stress =
        !rc.material || rc.material->condition == PlaneCondition::Stress;
    setup.problem = make_plate_with_hole(plane_stress, rc.mesh_kind == "distorted-quad");
  } else if (rc.problem == "custom" || rc.problem == "dyn_beam") {
    if (!rc.material) throw ParseError("custom problems require a [material] section");
    BenchmarkProblem p;
    p.name = rc.problem;
    p.material = *rc.material;
    p.level_count = 1;
    const auto bc_dirichlet = rc.bc_dirichlet;
    p.dirichlet = [bc_dirichlet](const PolygonalMesh& mesh) {
      DirichletMap bc;
      for (const auto& entry : bc_dirichlet) {
        auto fn = [](double v) {
          return std::function<double(const Vec2&)>([v](const Vec2&) { return v; });
        };
        dirichlet_on_tag(bc, mesh, entry.tag,
                         entry.ux ? std::optional(fn(*entry.ux)) : std::nullopt,
                         entry.uy ? std::optional(fn(*entry.uy)) : std::nullopt);
      }
      return bc;
    };
    const auto bc_traction = rc.bc_traction;
    p.loads = [bc_traction](const PolygonalMesh&) {
      LoadSpec loads;
      for (const auto& entry : bc_traction) {
        const Vec2 t = entry.traction;
        loads.tractions.push_back({entry.tag, [t](const Vec2&) { return t; }});
      }
      return loads;
    };
    setup.problem = std::move(p);
  } else {
    throw ParseError("unknown problem '" + rc.problem +
                     "' (valid: patch_test, colliding_flow, beam, cook, plate_hole, dyn_beam, "
                     "custom)");
  }

  if (rc.material) setup.problem.material = *rc.material;

  // Named problems with their own mesh sequences take the level from config;
  // generator-backed problems honor the [mesh] section.
  if (rc.problem == "cook" || rc.problem == "plate_hole") {
    const int level = std::min(rc.level, setup.problem.level_count - 1);
    setup.mesh = setup.problem.mesh_at_level(level);
    setup.mesh_source = rc.problem + " level " + std::to_string(level);
  } else {
    setup.mesh = mesh_from_config(rc, setup.default_domain, warnings);
    setup.mesh_source = rc.mesh_kind == "file" ? rc.mesh_file : rc.mesh_kind;
  }
  return setup;
}

Json material_json(const MaterialModel& m) {
  Json j;
  j["young"] = m.young;
  j["poisson"] = m.poisson;
  j["condition"] = m.condition == PlaneCondition::Strain
                       ? "strain"
                       : (m.condition == PlaneCondition::Stress ? "stress" : "lame");
  j["lambda"] = m.lambda();
  j["mu"] = m.mu();
  j["density"] = m.density;
  j["thickness"] = m.thickness;
  return j;
}

Json mesh_json(const PolygonalMesh& mesh, const std::string& source) {
  Json j;
  j["source"] = source;
  j["nodes"] = mesh.node_count();
  j["elements"] = mesh.element_count();
  j["dofs"] = mesh.dof_count();
  j["h"] = mesh_size(mesh);
  return j;
}

void write_report(const Json& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "report.json");
  out << report.dump(2) << "\n";
}

Json base_report(const RunConfig& rc, const std::string& command) {
  Json report;
  report["schema_version"] = 1;
  report["command"] = command;
  report["problem"] = rc.problem;
  report["method"] = to_string(rc.method);
  report["stabilization"] = to_string(rc.stab);
  return report;
}

}  // namespace

Json cmd_run(const RunConfig& rc) {
  std::vector<std::string> warnings;
  ProblemSetup setup = build_setup(rc, &warnings);

  const SolvedProblem solved =
      solve_benchmark(setup.problem, setup.mesh, rc.method, rc.stab,
                      [&](const std::string& w) { warnings.push_back(w); });

  Json report = base_report(rc, "run");
  report["mesh"] = mesh_json(setup.mesh, setup.mesh_source);
  report["material"] = material_json(setup.problem.material);
  if (solved.report) {
    report["norms"] = {{"l2_u", solved.report->l2_u},
                       {"h1_u", solved.report->h1_u},
                       {"l2_p", solved.report->l2_p}};
  }
  report["residual"] = solved.solution.residual;
  report["locking_suspect"] = rc.method == Method::Vem && rc.stab == Stabilization::Plain &&
                              setup.problem.material.poisson > 0.49;
  if (setup.problem.probe.norm() > 0.0) {
    const int node = nearest_node(setup.mesh, setup.problem.probe);
    report["probe"] = {{"node", node},
                       {"x", setup.mesh.nodes[node].x()},
                       {"y", setup.mesh.nodes[node].y()},
                       {"u1", solved.solution.displacement(2 * node)},
                       {"u2", solved.solution.displacement(2 * node + 1)}};
  }
  report["timings"] = {{"assemble_s", solved.assemble_seconds},
                       {"solve_s", solved.solve_seconds}};
  report["warnings"] = warnings;

  fs::create_directories(rc.out_dir);
  export_vtk_file((fs::path(rc.out_dir) / "solution.vtk").string(), setup.mesh,
                  solved.solution.displacement, solved.fields,
                  setup.problem.name + " " + to_string(rc.method));
  write_report(report, rc.out_dir);
  return report;
}

Json cmd_converge(const RunConfig& rc) {
  std::vector<std::string> warnings;
  ProblemSetup setup = build_setup(rc, &warnings);
  BenchmarkProblem problem = setup.problem;

  if (!rc.mesh_files.empty() && rc.problem != "cook") {
    const auto files = rc.mesh_files;
    problem.level_count = static_cast<int>(files.size());
    problem.mesh_at_level = [files](int level) {
      return load_mesh_file(files.at(static_cast<size_t>(level)));
    };
  }
  if (problem.level_count < 3)
    throw std::invalid_argument("converge: at least 3 mesh levels are required");

  std::vector<MethodSpec> specs;
  if (rc.methods.empty()) {
    specs.push_back({rc.method, rc.stab});
  } else {
    for (const std::string& m : rc.methods) {
      const auto dash = m.find('-');
      if (dash == std::string::npos)
        throw ParseError("methods entries look like 'nvem-dtilde', got '" + m + "'");
      specs.push_back({parse_method(m.substr(0, dash)), parse_stabilization(m.substr(dash + 1))});
    }
  }

  const StudyResult study = convergence_study(problem, specs);

  fs::create_directories(rc.out_dir);
  std::ofstream csv(fs::path(rc.out_dir) / "rates.csv");
  csv << "method,level,h,dofs,l2_u,h1_u,l2_p\n";
  for (const MethodStudy& ms : study.methods) {
    for (size_t level = 0; level < ms.levels.size(); ++level) {
      const ErrorReport& r = ms.levels[level];
      csv << ms.spec.label() << ',' << level << ',' << g17(r.h) << ',' << r.dofs << ','
          << g17(r.l2_u) << ',' << g17(r.h1_u) << ',' << g17(r.l2_p) << "\n";
    }
  }
  for (const MethodStudy& ms : study.methods)
    csv << ms.spec.label() << ",rate,,," << g17(ms.rate_l2) << ',' << g17(ms.rate_h1) << ','
        << g17(ms.rate_lp) << "\n";
  csv.close();

  Json report = base_report(rc, "converge");
  report["material"] = material_json(problem.material);
  Json methods = Json::array();
  for (const MethodStudy& ms : study.methods) {
    Json mj;
    mj["method"] = ms.spec.label();
    mj["rates"] = {{"l2_u", ms.rate_l2}, {"h1_u", ms.rate_h1}, {"l2_p", ms.rate_lp}};
    Json levels = Json::array();
    for (const ErrorReport& r : ms.levels)
      levels.push_back({{"h", r.h},
                        {"dofs", r.dofs},
                        {"l2_u", r.l2_u},
                        {"h1_u", r.h1_u},
                        {"l2_p", r.l2_p}});
    mj["levels"] = levels;
    methods.push_back(mj);
  }
  report["methods"] = methods;

  std::ofstream js(fs::path(rc.out_dir) / "summary.json");
  js << report.dump(2) << "\n";
  return report;
}

Json cmd_patch_test(const RunConfig& rc) {
  RunConfig local = rc;
  local.problem = "patch_test";
  std::vector<std::string> warnings;
  ProblemSetup setup = build_setup(local, &warnings);
  const SolvedProblem solved = solve_benchmark(setup.problem, setup.mesh, rc.method, rc.stab);

  Json report = base_report(local, "patch-test");
  report["mesh"] = mesh_json(setup.mesh, setup.mesh_source);
  report["norms"] = {{"l2_u", solved.report->l2_u}, {"h1_u", solved.report->h1_u}};
  report["tolerance"] = rc.tolerance;
  report["pass"] = solved.report->l2_u <= rc.tolerance && solved.report->h1_u <= rc.tolerance;
  write_report(report, rc.out_dir);
  if (!report["pass"].get<bool>())
    throw NumericalError("patch test failed: L2 = " + g17(solved.report->l2_u) +
                         ", H1 = " + g17(solved.report->h1_u));
  return report;
}

Json cmd_eig(const RunConfig& rc) {
  std::vector<std::string> warnings;
  ProblemSetup setup = build_setup(rc, &warnings);

  const GlobalSystem system = assemble(setup.mesh, rc.method, setup.problem.material, rc.stab,
                                       LoadSpec{}, {}, [&](const std::string& w) {
                                         warnings.push_back(w);
                                       });
  const EigenSpectrum spectrum = eigen_spectrum(system.K, rc.eig_count);

  fs::create_directories(rc.out_dir);
  std::ofstream csv(fs::path(rc.out_dir) / "eigenvalues.csv");
  csv << "index,value\n";
  for (int i = 0; i < spectrum.values.size(); ++i)
    csv << i << ',' << g17(spectrum.values(i)) << "\n";
  csv.close();

  std::ofstream modes(fs::path(rc.out_dir) / "modes.vtk");
  export_vtk_modes(modes, setup.mesh, spectrum.modes);

  const double scale = std::abs(spectrum.values(spectrum.values.size() - 1));
  int near_zero = 0;
  for (int i = 0; i < spectrum.values.size(); ++i)
    if (std::abs(spectrum.values(i)) <= 1e-9 * std::max(scale, 1.0)) ++near_zero;

  Json report = base_report(rc, "eig");
  report["mesh"] = mesh_json(setup.mesh, setup.mesh_source);
  report["eigenvalues"] = std::vector<double>(spectrum.values.data(),
                                              spectrum.values.data() + spectrum.values.size());
  report["near_zero_count"] = near_zero;
  report["warnings"] = warnings;
  write_report(report, rc.out_dir);
  return report;
}

Json cmd_dynamics(const RunConfig& rc) {
  if (!rc.has_dynamics) throw ParseError("dynamics requires a [dynamics] section");
  std::vector<std::string> warnings;
  ProblemSetup setup = build_setup(rc, &warnings);
  const MaterialModel& material = setup.problem.material;
  const DynamicsBlock& dyn = rc.dynamics;

  LoadSpec permanent;
  if (dyn.gravity != 0.0) {
    const double rho_g = material.density * dyn.gravity;
    permanent.body = [rho_g](const Vec2&) { return Vec2(0.0, -rho_g); };
  }
  LoadSpec scheduled;
  scheduled.point_loads.push_back({dyn.point, dyn.amplitude * dyn.force});

  AssembleOptions opts;
  opts.with_mass = true;
  const GlobalSystem system =
      assemble(setup.mesh, rc.method, material, rc.stab, permanent, opts,
               [&](const std::string& w) { warnings.push_back(w); });
  const ReducedSystem reduced = apply_dirichlet(system, setup.problem.dirichlet(setup.mesh));
  const Eigen::SparseMatrix<double> C = rayleigh_damping(*system.M, system.K, dyn.q1, dyn.q2);

  LoadHistory loads;
  loads.F_static = system.F;
  loads.F_scheduled =
      assemble_force_vector(setup.mesh, rc.method, material, scheduled);
  if (dyn.load == "constant") {
    loads.schedule = LoadSchedule::constant();
  } else if (dyn.load == "ramp-cutoff") {
    loads.schedule = LoadSchedule::ramp_cutoff(dyn.ramp_a, dyn.ramp_b, dyn.cutoff);
  } else if (dyn.load == "harmonic") {
    loads.schedule = LoadSchedule::harmonic(dyn.omega);
  } else {
    throw ParseError("unknown dynamics load '" + dyn.load +
                     "' (valid: constant, ramp-cutoff, harmonic)");
  }

  DynamicsConfig config;
  config.alpha = dyn.alpha;
  config.dt = dyn.dt;
  config.t_end = dyn.t_end;
  const Vec2 probe_at = dyn.probe.value_or(dyn.point);
  config.probe_nodes.push_back(nearest_node(setup.mesh, probe_at));

  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory traj = integrate(reduced, *system.M, C, loads, config);
  const double integrate_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(rc.out_dir);
  std::ofstream csv(fs::path(rc.out_dir) / "probe.csv");
  csv << "t,u1,u2\n";
  const ProbeSeries& ps = traj.probes.front();
  for (size_t i = 0; i < ps.t.size(); ++i)
    csv << g17(ps.t[i]) << ',' << g17(ps.u1[i]) << ',' << g17(ps.u2[i]) << "\n";
  csv.close();

  Json report = base_report(rc, "dynamics");
  report["mesh"] = mesh_json(setup.mesh, setup.mesh_source);
  report["material"] = material_json(material);
  report["dynamics"] = {{"alpha", dyn.alpha}, {"dt", dyn.dt},     {"t_end", dyn.t_end},
                        {"q1", dyn.q1},       {"q2", dyn.q2},     {"load", dyn.load},
                        {"steps", ps.t.size() - 1}};
  report["probe"] = {{"node", ps.node},
                     {"u1_final", ps.u1.back()},
                     {"u2_final", ps.u2.back()}};
  report["timings"] = {{"integrate_s", integrate_s}};
  report["warnings"] = warnings;
  write_report(report, rc.out_dir);
  return report;
}

Json cmd_mesh_gen(const RunConfig& rc, const std::string& out_path) {
  std::vector<std::string> warnings;
  const PolygonalMesh mesh = mesh_from_config(rc, rc.domain, &warnings);
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open '" + out_path + "' for writing");
  write_mesh(out, mesh);

  Json report;
  report["schema_version"] = 1;
  report["command"] = "mesh-gen";
  report["mesh"] = mesh_json(mesh, rc.mesh_kind);
  report["path"] = out_path;
  return report;
}

}  // namespace nvem
