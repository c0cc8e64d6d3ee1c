#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "nvem/config.hpp"

namespace nvem {

using Json = nlohmann::ordered_json;

/// Command drivers behind the CLI. Each solves, writes its artifacts under
/// config.out_dir (report.json, solution.vtk, rates.csv, probe.csv, ...) and
/// returns the report. Failures raise: ParseError for config/input problems,
/// NumericalError/GeometryError for solver-level ones.
Json cmd_run(const RunConfig& config);
Json cmd_converge(const RunConfig& config);
Json cmd_patch_test(const RunConfig& config);
Json cmd_eig(const RunConfig& config);
Json cmd_dynamics(const RunConfig& config);
Json cmd_mesh_gen(const RunConfig& config, const std::string& out_path);

}  // namespace nvem
