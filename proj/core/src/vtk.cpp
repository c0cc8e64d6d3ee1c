#include "nvem/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "nvem/errors.hpp"

namespace nvem {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& out, const PolygonalMesh& mesh, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const Vec2& p : mesh.nodes) out << g17(p.x()) << ' ' << g17(p.y()) << " 0\n";

  int cell_ints = 0;
  for (const auto& ring : mesh.elements) cell_ints += static_cast<int>(ring.size()) + 1;
  out << "CELLS " << mesh.element_count() << ' ' << cell_ints << "\n";
  for (const auto& ring : mesh.elements) {
    out << ring.size();
    for (int v : ring) out << ' ' << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.element_count() << "\n";
  for (int e = 0; e < mesh.element_count(); ++e) out << "7\n";  // VTK_POLYGON
}

void write_vectors(std::ostream& out, const std::string& name, const Eigen::VectorXd& dofs) {
  out << "VECTORS " << name << " double\n";
  for (int i = 0; i < dofs.size(); i += 2)
    out << g17(dofs(i)) << ' ' << g17(dofs(i + 1)) << " 0\n";
}

void write_scalars(std::ostream& out, const std::string& name, const Eigen::VectorXd& v) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < v.size(); ++i) out << g17(v(i)) << "\n";
}

void write_field3(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << name << " 3 " << m.rows() << " double\n";
  for (int i = 0; i < m.rows(); ++i)
    out << g17(m(i, 0)) << ' ' << g17(m(i, 1)) << ' ' << g17(m(i, 2)) << "\n";
}

}  // namespace

void export_vtk(std::ostream& out, const PolygonalMesh& mesh,
                const Eigen::VectorXd& displacement, const NodalFields& fields,
                const std::string& title) {
  const int n = mesh.node_count();
  if (displacement.size() != 2 * n || fields.strain.rows() != n || fields.stress.rows() != n ||
      fields.pressure.size() != n || fields.von_mises.size() != n)
    throw std::invalid_argument("export_vtk: field sizes do not match the node count");

  write_header(out, mesh, title);
  out << "POINT_DATA " << n << "\n";
  write_vectors(out, "displacement", displacement);
  write_scalars(out, "pressure", fields.pressure);
  write_scalars(out, "von_mises", fields.von_mises);
  out << "FIELD nodal_fields 2\n";
  write_field3(out, "strain", fields.strain);
  write_field3(out, "stress", fields.stress);
}

void export_vtk_file(const std::string& path, const PolygonalMesh& mesh,
                     const Eigen::VectorXd& displacement, const NodalFields& fields,
                     const std::string& title) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  export_vtk(out, mesh, displacement, fields, title);
}

void export_vtk_modes(std::ostream& out, const PolygonalMesh& mesh, const Eigen::MatrixXd& modes,
                      const std::string& title) {
  if (modes.rows() != mesh.dof_count())
    throw std::invalid_argument("export_vtk_modes: mode size does not match the dof count");
  write_header(out, mesh, title);
  out << "POINT_DATA " << mesh.node_count() << "\n";
  for (int j = 0; j < modes.cols(); ++j)
    write_vectors(out, "mode_" + std::to_string(j), modes.col(j));
}

}  // namespace nvem
