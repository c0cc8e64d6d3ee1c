#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "nvem/mesh.hpp"
#include "nvem/nodal_ops.hpp"

namespace nvem {

/// Legacy ASCII VTK unstructured grid with polygon cells. Point data:
/// displacement vector, Voigt strain/stress field arrays, pressure and von
/// Mises scalars. Numbers carry 17 significant digits so values round-trip.
void export_vtk(std::ostream& out, const PolygonalMesh& mesh,
                const Eigen::VectorXd& displacement, const NodalFields& fields,
                const std::string& title = "nvem solution");

void export_vtk_file(const std::string& path, const PolygonalMesh& mesh,
                     const Eigen::VectorXd& displacement, const NodalFields& fields,
                     const std::string& title = "nvem solution");

/// Mode-shape export for the eigenvalue studies: one vector field per mode.
void export_vtk_modes(std::ostream& out, const PolygonalMesh& mesh, const Eigen::MatrixXd& modes,
                      const std::string& title = "nvem modes");

}  // namespace nvem
