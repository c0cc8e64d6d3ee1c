#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nvem/errors.hpp"
#include "nvem/runner.hpp"

namespace {

struct GlobalFlags {
  std::optional<std::string> method;
  std::optional<std::string> stab;
  std::optional<std::string> out;
  std::optional<int> seed;
};

nvem::RunConfig load_config(const std::string& path, const GlobalFlags& flags) {
  nvem::RunConfig rc = path.empty() ? nvem::RunConfig{}
                                    : nvem::parse_run_config(nvem::Config::parse_file(path));
  if (flags.method) rc.method = nvem::parse_method(*flags.method);
  if (flags.stab) rc.stab = nvem::parse_stabilization(*flags.stab);
  if (flags.out) rc.out_dir = *flags.out;
  if (flags.seed) rc.seed = static_cast<std::uint64_t>(*flags.seed);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvemkit - polygonal virtual element solver for 2D elasticity"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--method", flags.method, "vem | nvem (overrides config)");
  app.add_option("--stab", flags.stab, "plain | dtilde | dmu-full | dmu-shear");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--seed", flags.seed, "generator seed override");

  std::string config_path, gen_out = "mesh.msh";

  auto add_config_cmd = [&](const char* name, const char* help, bool config_required) {
    CLI::App* cmd = app.add_subcommand(name, help);
    auto* opt = cmd->add_option("config", config_path, "problem configuration file");
    if (config_required) opt->required();
    return cmd;
  };

  CLI::App* run = add_config_cmd("run", "solve one problem and write solution.vtk/report.json",
                                 true);
  CLI::App* converge =
      add_config_cmd("converge", "run a mesh sequence and fit convergence rates", true);
  CLI::App* patch = add_config_cmd("patch-test", "linear displacement patch test", false);
  CLI::App* eig = add_config_cmd("eig", "smallest eigenvalues of the unconstrained stiffness",
                                 false);
  CLI::App* dynamics = add_config_cmd("dynamics", "HHT-alpha time integration", true);
  CLI::App* mesh_gen = add_config_cmd("mesh-gen", "generate a structured mesh file", false);
  mesh_gen->add_option("--mesh-out", gen_out, "output mesh path");

  CLI11_PARSE(app, argc, argv);

  try {
    const nvem::RunConfig rc = load_config(config_path, flags);
    nvem::Json report;
    if (run->parsed()) report = nvem::cmd_run(rc);
    else if (converge->parsed()) report = nvem::cmd_converge(rc);
    else if (patch->parsed()) report = nvem::cmd_patch_test(rc);
    else if (eig->parsed()) report = nvem::cmd_eig(rc);
    else if (dynamics->parsed()) report = nvem::cmd_dynamics(rc);
    else if (mesh_gen->parsed()) report = nvem::cmd_mesh_gen(rc, gen_out);
    std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const nvem::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
