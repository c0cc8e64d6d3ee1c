#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nvem {

using Vec2 = Eigen::Vector2d;

/// Channel for non-fatal diagnostics (CW rings fixed up, disconnected meshes, ...).
using WarningSink = std::function<void(const std::string&)>;

struct BoundaryEdge {
  std::string tag;
  int element = -1;
  int local_edge = -1;  // edge k runs from ring[k] to ring[(k+1) % n]
};

/// Conforming polygonal mesh. Elements are counter-clockwise vertex rings;
/// collinear (coplanar-edge) vertices are allowed, zero-area rings are not.
struct PolygonalMesh {
  std::vector<Vec2> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<BoundaryEdge> boundary;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  int dof_count() const { return 2 * node_count(); }
};

struct ElementGeometry {
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();  // arithmetic mean of the vertices, not the area centroid
  std::vector<Vec2> vertices;
  std::vector<double> edge_lengths;  // edge a starts at vertex a
  std::vector<Vec2> edge_normals;    // unit outward
  double diameter = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
};

struct NodalPatch {
  int node = -1;
  std::vector<int> elements;     // elements sharing the node
  double area = 0.0;             // |I| = sum of |E| / N_E^V over the patch
  std::vector<double> weights;   // w_E = |E| / (N_E^V |I|), aligned with `elements`
  std::vector<int> patch_nodes;  // sorted union of node indices over the patch
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

enum class StructuredKind { Quad, DistortedQuad, HexDominant };

/// Parses the line-oriented mesh format ('#' comments):
///   nodes <N>        followed by N lines "x y"
///   elements <M>     followed by M lines "k v1 ... vk" (0-based, CCW)
///   boundary <B>     optional, B lines "tag elem local_edge"
/// Clockwise rings are re-oriented and reported through `warn`.
PolygonalMesh load_mesh(std::istream& in, const WarningSink& warn = {});
PolygonalMesh load_mesh_file(const std::string& path, const WarningSink& warn = {});
void write_mesh(std::ostream& out, const PolygonalMesh& mesh);

/// Deterministic structured generators. Quad: uniform grid. DistortedQuad:
/// interior nodes jittered by distortion*h with the given seed. HexDominant:
/// a staggered running-bond tiling whose interior cells are hexagons
/// (boundary cells degrade to pentagons/quads), used for the polygonal-mesh
/// studies. Boundary edges are tagged left/right/top/bottom.
PolygonalMesh generate_structured(StructuredKind kind, int nx, int ny, const Rect& domain,
                                  double distortion = 0.0, std::uint64_t seed = 0);

ElementGeometry element_geometry(const PolygonalMesh& mesh, int element);

/// One patch per node; Sum_I |I| equals the total mesh area by construction.
std::vector<NodalPatch> build_patches(const PolygonalMesh& mesh);

struct TaggedEdge {
  int n0 = -1, n1 = -1;  // endpoints in traversal order of the owning ring
  double length = 0.0;
  Vec2 normal = Vec2::Zero();  // outward
  int element = -1;
  int local_edge = -1;
};

/// Edges carrying `tag`, in file order. Unknown tags are an error; the empty
/// selector returns an empty list.
std::vector<TaggedEdge> boundary_edges(const PolygonalMesh& mesh, const std::string& tag);

/// Nodes on the topological boundary (edges owned by exactly one element).
std::vector<int> boundary_node_set(const PolygonalMesh& mesh);

/// Max element diameter.
double mesh_size(const PolygonalMesh& mesh);

/// Index of the node closest to `p`.
int nearest_node(const PolygonalMesh& mesh, const Vec2& p);

}  // namespace nvem
