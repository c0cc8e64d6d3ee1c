#include "nvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "nvem/errors.hpp"

namespace nvem {

namespace {

double shoelace_area(const std::vector<Vec2>& nodes, const std::vector<int>& ring) {
  double twice = 0.0;
  const int n = static_cast<int>(ring.size());
  for (int a = 0; a < n; ++a) {
    const Vec2& p = nodes[ring[a]];
    const Vec2& q = nodes[ring[(a + 1) % n]];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

// Uniform double in [0,1) from the top 53 bits; avoids the libstdc++/libc++
// divergence of uniform_real_distribution so generated meshes are bit-stable.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double symmetric_unit(std::mt19937_64& rng) { return 2.0 * unit_double(rng) - 1.0; }

void validate_mesh(PolygonalMesh& mesh, const WarningSink& warn) {
  const int nn = mesh.node_count();
  double scale = 0.0;
  for (const Vec2& p : mesh.nodes) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  if (scale == 0.0) scale = 1.0;

  for (int e = 0; e < mesh.element_count(); ++e) {
    auto& ring = mesh.elements[e];
    if (ring.size() < 3)
      throw ParseError("element " + std::to_string(e) + " has fewer than 3 vertices");
    std::unordered_set<int> seen;
    for (int v : ring) {
      if (v < 0 || v >= nn)
        throw ParseError("element " + std::to_string(e) + " references node " +
                         std::to_string(v) + " of " + std::to_string(nn));
      if (!seen.insert(v).second)
        throw ParseError("element " + std::to_string(e) + " repeats node " + std::to_string(v));
    }
    const double area = shoelace_area(mesh.nodes, ring);
    if (std::abs(area) < 1e-14 * scale * scale)
      throw ParseError("element " + std::to_string(e) + " is degenerate (zero area)");
    if (area < 0.0) {
      const int n = static_cast<int>(ring.size());
      std::reverse(ring.begin() + 1, ring.end());
      for (auto& be : mesh.boundary) {
        if (be.element == e) be.local_edge = (n - 1 - be.local_edge) % n;
      }
      if (warn) warn("element " + std::to_string(e) + " was clockwise; re-oriented to CCW");
    }
  }

  for (const auto& be : mesh.boundary) {
    if (be.element < 0 || be.element >= mesh.element_count())
      throw ParseError("boundary record tags element " + std::to_string(be.element) +
                       " out of range");
    const int n = static_cast<int>(mesh.elements[be.element].size());
    if (be.local_edge < 0 || be.local_edge >= n)
      throw ParseError("boundary record tags local edge " + std::to_string(be.local_edge) +
                       " of element " + std::to_string(be.element) + " with " +
                       std::to_string(n) + " edges");
  }

  // Conformity: interior edges shared by exactly two elements traversed in
  // opposite directions, boundary edges by exactly one.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;  // (min,max) -> (from,to)
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ring = mesh.elements[e];
    const int n = static_cast<int>(ring.size());
    for (int a = 0; a < n; ++a) {
      const int u = ring[a], v = ring[(a + 1) % n];
      edges[{std::min(u, v), std::max(u, v)}].push_back({u, v});
    }
  }
  for (const auto& [key, occ] : edges) {
    if (occ.size() > 2)
      throw ParseError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                       ") is shared by more than two elements");
    if (occ.size() == 2 && occ[0] == occ[1])
      throw ParseError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                       ") is traversed twice in the same direction");
  }
}

// Strips '#' comments and skips blank lines.
bool next_record(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

PolygonalMesh load_mesh(std::istream& in, const WarningSink& warn) {
  PolygonalMesh mesh;
  std::string line;
  int lineno = 0;

  auto expect_header = [&](const char* what, bool required) -> long {
    if (!next_record(in, line, lineno)) {
      if (required) throw ParseError(std::string("expected '") + what + " <count>' header");
      return -1;
    }
    std::istringstream ss(line);
    std::string word;
    long count = -1;
    if (!(ss >> word >> count) || word != what || count < 0)
      throw ParseError("line " + std::to_string(lineno) + ": expected '" + what +
                       " <count>', got '" + line + "'");
    return count;
  };

  const long nn = expect_header("nodes", true);
  mesh.nodes.reserve(nn);
  for (long i = 0; i < nn; ++i) {
    if (!next_record(in, line, lineno))
      throw ParseError("unexpected end of input reading node " + std::to_string(i));
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y))
      throw ParseError("line " + std::to_string(lineno) + ": malformed node record '" + line +
                       "'");
    mesh.nodes.emplace_back(x, y);
  }

  const long ne = expect_header("elements", true);
  mesh.elements.reserve(ne);
  for (long i = 0; i < ne; ++i) {
    if (!next_record(in, line, lineno))
      throw ParseError("unexpected end of input reading element " + std::to_string(i));
    std::istringstream ss(line);
    long k = 0;
    if (!(ss >> k) || k < 3)
      throw ParseError("line " + std::to_string(lineno) + ": malformed element record '" + line +
                       "'");
    std::vector<int> ring(k);
    for (long a = 0; a < k; ++a) {
      if (!(ss >> ring[a]))
        throw ParseError("line " + std::to_string(lineno) + ": element " + std::to_string(i) +
                         " lists fewer than " + std::to_string(k) + " vertices");
    }
    mesh.elements.push_back(std::move(ring));
  }

  if (in.peek() != std::char_traits<char>::eof()) {
    const long nb = expect_header("boundary", false);
    for (long i = 0; i < nb; ++i) {
      if (!next_record(in, line, lineno))
        throw ParseError("unexpected end of input reading boundary record " + std::to_string(i));
      std::istringstream ss(line);
      BoundaryEdge be;
      if (!(ss >> be.tag >> be.element >> be.local_edge))
        throw ParseError("line " + std::to_string(lineno) + ": malformed boundary record '" +
                         line + "'");
      mesh.boundary.push_back(std::move(be));
    }
  }

  validate_mesh(mesh, warn);
  return mesh;
}

PolygonalMesh load_mesh_file(const std::string& path, const WarningSink& warn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  return load_mesh(in, warn);
}

void write_mesh(std::ostream& out, const PolygonalMesh& mesh) {
  out << "nodes " << mesh.node_count() << "\n";
  char buf[80];
  for (const Vec2& p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "elements " << mesh.element_count() << "\n";
  for (const auto& ring : mesh.elements) {
    out << ring.size();
    for (int v : ring) out << ' ' << v;
    out << "\n";
  }
  if (!mesh.boundary.empty()) {
    out << "boundary " << mesh.boundary.size() << "\n";
    for (const auto& be : mesh.boundary)
      out << be.tag << ' ' << be.element << ' ' << be.local_edge << "\n";
  }
}

namespace {

PolygonalMesh make_grid(int nx, int ny, const Rect& dom, double distortion, std::uint64_t seed) {
  PolygonalMesh mesh;
  const double hx = dom.width() / nx, hy = dom.height() / ny;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) mesh.nodes.emplace_back(dom.x0 + i * hx, dom.y0 + j * hy);

  if (distortion > 0.0) {
    std::mt19937_64 rng(seed);
    for (int j = 1; j < ny; ++j)
      for (int i = 1; i < nx; ++i) {
        const double dx = distortion * hx * symmetric_unit(rng);
        const double dy = distortion * hy * symmetric_unit(rng);
        mesh.nodes[id(i, j)] += Vec2(dx, dy);
      }
  }

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      const int e = static_cast<int>(mesh.elements.size()) - 1;
      if (j == 0) mesh.boundary.push_back({"bottom", e, 0});
      if (i == nx - 1) mesh.boundary.push_back({"right", e, 1});
      if (j == ny - 1) mesh.boundary.push_back({"top", e, 2});
      if (i == 0) mesh.boundary.push_back({"left", e, 3});
    }
  return mesh;
}

// Running-bond tiling: row j is offset by half a cell when j is odd, and each
// cell picks up the joint positions of the rows above/below as extra vertices,
// so interior cells are hexagons.
PolygonalMesh make_hex_dominant(int nx, int ny, const Rect& dom) {
  PolygonalMesh mesh;
  const double hx = dom.width() / nx, hy = dom.height() / ny;

  // Joint x-positions of row j in units of hx/2 (exact integers, so node
  // dedup across rows is exact).
  auto joints = [&](int j) {
    std::vector<int> xs;
    xs.push_back(0);
    if (j % 2 == 0) {
      for (int i = 1; i < nx; ++i) xs.push_back(2 * i);
    } else {
      for (int i = 0; i < nx; ++i) xs.push_back(2 * i + 1);
    }
    xs.push_back(2 * nx);
    return xs;
  };

  std::map<std::pair<int, int>, int> node_ids;  // (ix half-units, iy row) -> id
  auto node = [&](int ix, int iy) {
    auto [it, inserted] = node_ids.insert({{ix, iy}, mesh.node_count()});
    if (inserted) mesh.nodes.emplace_back(dom.x0 + 0.5 * ix * hx, dom.y0 + iy * hy);
    return it->second;
  };

  for (int j = 0; j < ny; ++j) {
    const auto row = joints(j);
    const auto below = j > 0 ? joints(j - 1) : std::vector<int>{};
    const auto above = j + 1 < ny ? joints(j + 1) : std::vector<int>{};
    for (size_t k = 0; k + 1 < row.size(); ++k) {
      const int a = row[k], b = row[k + 1];
      std::vector<int> ring;
      ring.push_back(node(a, j));
      for (int u : below)
        if (u > a && u < b) ring.push_back(node(u, j));
      const int bottom_edges = static_cast<int>(ring.size());
      ring.push_back(node(b, j));
      ring.push_back(node(b, j + 1));
      for (auto it = above.rbegin(); it != above.rend(); ++it)
        if (*it > a && *it < b) ring.push_back(node(*it, j + 1));
      ring.push_back(node(a, j + 1));
      const int n = static_cast<int>(ring.size());
      mesh.elements.push_back(std::move(ring));
      const int e = static_cast<int>(mesh.elements.size()) - 1;
      if (j == 0) mesh.boundary.push_back({"bottom", e, 0});
      if (k + 2 == row.size()) mesh.boundary.push_back({"right", e, bottom_edges});
      if (j == ny - 1) mesh.boundary.push_back({"top", e, bottom_edges + 1});
      if (k == 0) mesh.boundary.push_back({"left", e, n - 1});
    }
  }
  return mesh;
}

}  // namespace

PolygonalMesh generate_structured(StructuredKind kind, int nx, int ny, const Rect& domain,
                                  double distortion, std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_structured: nx, ny must be >= 1");
  if (domain.width() <= 0.0 || domain.height() <= 0.0)
    throw std::invalid_argument("generate_structured: empty domain");
  if (kind == StructuredKind::DistortedQuad && !(distortion >= 0.0 && distortion < 0.5))
    throw std::invalid_argument("generate_structured: distortion must lie in [0, 0.5)");

  PolygonalMesh mesh;
  switch (kind) {
    case StructuredKind::Quad:
      mesh = make_grid(nx, ny, domain, 0.0, seed);
      break;
    case StructuredKind::DistortedQuad:
      mesh = make_grid(nx, ny, domain, distortion, seed);
      break;
    case StructuredKind::HexDominant:
      mesh = make_hex_dominant(nx, ny, domain);
      break;
  }

  for (int e = 0; e < mesh.element_count(); ++e) {
    if (shoelace_area(mesh.nodes, mesh.elements[e]) <= 0.0)
      throw GeometryError("generated element " + std::to_string(e) +
                          " has non-positive area (distortion too large)");
  }
  return mesh;
}

ElementGeometry element_geometry(const PolygonalMesh& mesh, int element) {
  if (element < 0 || element >= mesh.element_count())
    throw std::invalid_argument("element index out of range");
  const auto& ring = mesh.elements[element];
  const int n = static_cast<int>(ring.size());

  ElementGeometry g;
  g.vertices.resize(n);
  for (int a = 0; a < n; ++a) g.vertices[a] = mesh.nodes[ring[a]];
  g.area = shoelace_area(mesh.nodes, ring);

  g.centroid = Vec2::Zero();
  for (const Vec2& p : g.vertices) g.centroid += p;
  g.centroid /= n;

  g.edge_lengths.resize(n);
  g.edge_normals.resize(n);
  for (int a = 0; a < n; ++a) {
    const Vec2 d = g.vertices[(a + 1) % n] - g.vertices[a];
    g.edge_lengths[a] = d.norm();
    g.edge_normals[a] = Vec2(d.y(), -d.x()) / g.edge_lengths[a];  // outward for CCW rings
  }

  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      g.diameter = std::max(g.diameter, (g.vertices[a] - g.vertices[b]).norm());
  return g;
}

std::vector<NodalPatch> build_patches(const PolygonalMesh& mesh) {
  std::vector<NodalPatch> patches(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) patches[i].node = i;

  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& ring = mesh.elements[e];
    const double share = shoelace_area(mesh.nodes, ring) / static_cast<double>(ring.size());
    for (int v : ring) {
      patches[v].elements.push_back(e);
      patches[v].area += share;
    }
  }

  for (auto& patch : patches) {
    std::set<int> dofs;
    patch.weights.reserve(patch.elements.size());
    for (int e : patch.elements) {
      const auto& ring = mesh.elements[e];
      const double area = shoelace_area(mesh.nodes, ring);
      patch.weights.push_back(area / (static_cast<double>(ring.size()) * patch.area));
      dofs.insert(ring.begin(), ring.end());
    }
    patch.patch_nodes.assign(dofs.begin(), dofs.end());
  }
  return patches;
}

std::vector<TaggedEdge> boundary_edges(const PolygonalMesh& mesh, const std::string& tag) {
  if (tag.empty()) return {};
  bool known = false;
  std::vector<TaggedEdge> out;
  for (const auto& be : mesh.boundary) {
    if (be.tag != tag) continue;
    known = true;
    const auto& ring = mesh.elements[be.element];
    const int n = static_cast<int>(ring.size());
    TaggedEdge edge;
    edge.element = be.element;
    edge.local_edge = be.local_edge;
    edge.n0 = ring[be.local_edge];
    edge.n1 = ring[(be.local_edge + 1) % n];
    const Vec2 d = mesh.nodes[edge.n1] - mesh.nodes[edge.n0];
    edge.length = d.norm();
    edge.normal = Vec2(d.y(), -d.x()) / edge.length;
    out.push_back(edge);
  }
  if (!known) {
    std::set<std::string> tags;
    for (const auto& be : mesh.boundary) tags.insert(be.tag);
    std::string all;
    for (const auto& t : tags) all += (all.empty() ? "" : ", ") + t;
    throw std::invalid_argument("unknown boundary tag '" + tag + "' (known: " + all + ")");
  }
  return out;
}

std::vector<int> boundary_node_set(const PolygonalMesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& ring : mesh.elements) {
    const int n = static_cast<int>(ring.size());
    for (int a = 0; a < n; ++a) {
      const int u = ring[a], v = ring[(a + 1) % n];
      ++count[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::set<int> nodes;
  for (const auto& [edge, c] : count) {
    if (c == 1) {
      nodes.insert(edge.first);
      nodes.insert(edge.second);
    }
  }
  return {nodes.begin(), nodes.end()};
}

double mesh_size(const PolygonalMesh& mesh) {
  double h = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) h = std::max(h, element_geometry(mesh, e).diameter);
  return h;
}

int nearest_node(const PolygonalMesh& mesh, const Vec2& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::max();
  for (int i = 0; i < mesh.node_count(); ++i) {
    const double d = (mesh.nodes[i] - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace nvem
