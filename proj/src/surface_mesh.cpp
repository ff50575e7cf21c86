#include "spherevol/surface_mesh.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "spherevol/errors.hpp"

namespace spherevol {

namespace {

Vec3 head(const Vec6& v) { return v.head<3>(); }
Vec3 tail(const Vec6& v) { return v.tail<3>(); }

Vec6 stack6(const Vec3& p, const Vec3& w) {
  Vec6 out;
  out << p, w;
  return out;
}

double triangle_area(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c) {
  const Eigen::VectorXd u = b - a, v = c - a;
  const double uu = u.squaredNorm(), vv = v.squaredNorm(), uv = u.dot(v);
  return 0.5 * std::sqrt(std::max(uu * vv - uv * uv, 0.0));
}

Eigen::VectorXd ambient_point(const SurfaceMesh& mesh, int v) {
  const Vec6& x = mesh.vertices[v];
  if (mesh.ambient == Ambient::UnitTangentBundle) return sasaki_lift(head(x), tail(x));
  return x;
}

}  // namespace

double SurfaceMesh::max_identification_gap() const {
  double gap = 0.0;
  for (std::size_t v = 0; v < identify.size(); ++v) {
    gap = std::max(gap, (vertices[v] - vertices[identify[v]]).norm());
  }
  return gap;
}

double SurfaceMesh::max_constraint_residual() const {
  double res = 0.0;
  for (const Vec6& x : vertices) {
    res = std::max(res, BundlePoint::constraint_residual(head(x), tail(x)));
  }
  return res;
}

MeshTopology analyze_topology(const SurfaceMesh& mesh) {
  MeshTopology topo;
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : mesh.faces) {
    const std::array<int, 3> g{mesh.glued(f[0]), mesh.glued(f[1]), mesh.glued(f[2])};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) {
      ++topo.degenerate_faces;
      continue;
    }
    faces.push_back(g);
  }

  std::map<int, int> vertex_ids;
  for (const auto& f : faces) {
    for (int v : f) vertex_ids.emplace(v, static_cast<int>(vertex_ids.size()));
  }

  // edge -> list of (face, +1 if the face traverses it low -> high)
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
    for (int c = 0; c < 3; ++c) {
      const int a = faces[fi][c], b = faces[fi][(c + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({fi, a < b ? 1 : -1});
    }
  }

  std::vector<std::pair<int, int>> allowed = mesh.boundary_edges;
  std::sort(allowed.begin(), allowed.end());
  std::vector<std::vector<std::pair<int, int>>> adjacency(faces.size());
  bool unexpected_boundary = false;
  for (const auto& [edge, incident] : edges) {
    if (incident.size() == 1) {
      ++topo.boundary_edges;
      if (!std::binary_search(allowed.begin(), allowed.end(), edge)) unexpected_boundary = true;
    } else if (incident.size() > 2) {
      ++topo.nonmanifold_edges;
    } else {
      const auto [f, df] = incident[0];
      const auto [g, dg] = incident[1];
      // Consistent orientations traverse a shared edge in opposite directions,
      // so orient[g] must equal -df * dg * orient[f].
      adjacency[f].push_back({g, -df * dg});
      adjacency[g].push_back({f, -df * dg});
    }
  }

  std::vector<int> orient(faces.size(), 0);
  bool orientable = true;
  for (std::size_t start = 0; start < faces.size(); ++start) {
    if (orient[start] != 0) continue;
    ++topo.components;
    orient[start] = 1;
    std::queue<int> todo;
    todo.push(static_cast<int>(start));
    while (!todo.empty()) {
      const int f = todo.front();
      todo.pop();
      for (const auto& [g, rel] : adjacency[f]) {
        const int want = rel * orient[f];
        if (orient[g] == 0) {
          orient[g] = want;
          todo.push(g);
        } else if (orient[g] != want) {
          orientable = false;
        }
      }
    }
  }

  topo.vertices = static_cast<int>(vertex_ids.size());
  topo.edges = static_cast<int>(edges.size());
  topo.faces = static_cast<int>(faces.size());
  topo.euler = topo.vertices - topo.edges + topo.faces;
  topo.closed = topo.boundary_edges == 0 && topo.nonmanifold_edges == 0;
  if (unexpected_boundary) topo.closed = false;
  topo.orientable = orientable && topo.nonmanifold_edges == 0;
  return topo;
}

SurfaceMesh graph_surface_mesh(int k, int n_alpha, int n_beta) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidArgument("graph_surface_mesh: k must be an even integer >= 2");
  }
  if (n_alpha < 2) throw InvalidArgument("graph_surface_mesh: n_alpha must be >= 2");
  if (n_beta < 6 || n_beta % 2 != 0) {
    throw InvalidArgument("graph_surface_mesh: n_beta must be even and >= 6");
  }

  SurfaceMesh mesh;
  mesh.ambient = Ambient::UnitTangentBundle;
  const int levels = n_alpha + 1;  // south ring, interior rows, north ring
  auto id = [n_beta](int level, int j) { return level * n_beta + (j % n_beta); };

  for (int level = 0; level < levels; ++level) {
    const double a = -kPi / 2 + kPi * level / n_alpha;
    const char* tag = level == 0 ? "south_fibre" : level == n_alpha ? "north_fibre" : "lattice";
    for (int j = 0; j < n_beta; ++j) {
      const double b = kTwoPi * j / n_beta;
      const double th = (k - 1) * b;
      const Frame fr = frame_from_angles(a, b);
      const double ca = std::cos(a), sa = std::sin(a);
      Vec3 p(ca * std::cos(b), ca * std::sin(b), sa);
      if (level == 0) p = Vec3(0.0, 0.0, -1.0);
      if (level == n_alpha) p = Vec3(0.0, 0.0, 1.0);
      const Vec3 w = (std::cos(th) * fr.e1 + std::sin(th) * fr.e2).normalized();
      mesh.vertices.push_back(stack6(p, w));
      mesh.vertex_tags.emplace_back(tag);
    }
  }

  mesh.identify.resize(mesh.vertices.size());
  std::iota(mesh.identify.begin(), mesh.identify.end(), 0);
  auto close_pole = [&](int level, int index) {
    for (int j = 0; j < n_beta; ++j) {
      mesh.identify[id(level, j)] = index == 0 ? id(level, 0) : id(level, j % (n_beta / 2));
    }
  };
  close_pole(0, 2 - k);
  close_pole(n_alpha, k);

  for (int level = 0; level + 1 < levels; ++level) {
    for (int j = 0; j < n_beta; ++j) {
      const int a = id(level, j), b = id(level, j + 1);
      const int c = id(level + 1, j + 1), d = id(level + 1, j);
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

double surface_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    area += triangle_area(ambient_point(mesh, f[0]), ambient_point(mesh, f[1]),
                          ambient_point(mesh, f[2]));
  }
  return area;
}

void write_off(const SurfaceMesh& mesh, std::ostream& out) {
  out << "nOFF\n6\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  const auto old_precision = out.precision(17);
  for (const Vec6& v : mesh.vertices) {
    for (int m = 0; m < 6; ++m) out << (m ? " " : "") << v[m];
    out << '\n';
  }
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  out.precision(old_precision);
}

std::string mesh_sidecar_json(const SurfaceMesh& mesh, int k, int n_alpha, int n_beta) {
  using nlohmann::json;
  const MeshTopology topo = analyze_topology(mesh);
  json ident = json::array();
  for (std::size_t v = 0; v < mesh.identify.size(); ++v) {
    if (mesh.identify[v] != static_cast<int>(v)) ident.push_back({v, mesh.identify[v]});
  }
  json tags = json::object();
  for (std::size_t v = 0; v < mesh.vertex_tags.size(); ++v) {
    auto& range = tags[mesh.vertex_tags[v]];
    if (range.is_null()) range = {v, 0};
    range[1] = range[1].get<int>() + 1;
  }
  json doc = {
      {"schema", 1},
      {"k", k},
      {"n_alpha", n_alpha},
      {"n_beta", n_beta},
      {"ambient", mesh.ambient == Ambient::UnitTangentBundle ? "unit_tangent_bundle"
                                                             : "euclidean"},
      {"coordinates", "p_x p_y p_z w_x w_y w_z"},
      {"identifications", ident},
      {"vertex_tags", tags},
      {"boundary_edges", mesh.boundary_edges},
      {"topology",
       {{"vertices", topo.vertices},
        {"edges", topo.edges},
        {"faces", topo.faces},
        {"euler", topo.euler},
        {"degenerate_faces", topo.degenerate_faces},
        {"closed", topo.closed},
        {"orientable", topo.orientable},
        {"components", topo.components}}},
  };
  return doc.dump(2);
}

}  // namespace spherevol
