#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spherevol/bundle_geometry.hpp"

namespace spherevol {

enum class Ambient {
  Euclidean,         // vertices are plain points of R^6
  UnitTangentBundle  // vertices are (p, w) pairs; lengths use the Sasaki metric
};

/// Triangle mesh with a vertex gluing map.
///
/// `identify[v]` is the representative of v after gluing (identify[v] == v
/// for vertices that are kept). Topology is computed on the glued complex;
/// faces that collapse under the gluing are dropped there.
struct SurfaceMesh {
  Ambient ambient = Ambient::Euclidean;
  std::vector<Vec6> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> identify;
  // Edges (glued vertex ids, ascending) allowed to border a single face.
  std::vector<std::pair<int, int>> boundary_edges;
  std::vector<std::string> vertex_tags;  // "lattice", "north_fibre", ...

  int glued(int v) const { return identify.empty() ? v : identify[v]; }
  // Largest distance between a vertex and its representative.
  double max_identification_gap() const;
  // Largest BundlePoint constraint residual over all vertices.
  double max_constraint_residual() const;
};

struct MeshTopology {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int euler = 0;
  int degenerate_faces = 0;   // dropped because two corners were glued
  int boundary_edges = 0;     // edges with one face
  int nonmanifold_edges = 0;  // edges with more than two faces
  bool closed = false;
  bool orientable = false;
  int components = 0;
};

// Euler characteristic and breadth-first orientation propagation.
MeshTopology analyze_topology(const SurfaceMesh& mesh);

/// Closure of the graph of v_k (theta0 = 0) in the unit tangent bundle.
///
/// Lattice rows at a_i = -pi/2 + i pi / n_alpha (0 < i < n_alpha) and
/// columns b_j = 2 pi j / n_beta, plus one ring per pole holding the limit
/// vectors. A pole whose index I is nonzero is closed by the fibre circle,
/// with ring vertex j glued to j + n_beta / 2 (a Moebius band around the
/// fibre, covered |I| / 2 times). A pole of index 0 is closed by a single
/// point since the field extends continuously there. k even, k >= 2;
/// n_beta even.
SurfaceMesh graph_surface_mesh(int k, int n_alpha, int n_beta);

// Sum of triangle areas: Euclidean in R^6, or through sasaki_lift for bundle
// meshes.
double surface_area(const SurfaceMesh& mesh);

// nOFF text: "nOFF", dimension 6, counts, vertex rows, face rows.
void write_off(const SurfaceMesh& mesh, std::ostream& out);
// Sidecar JSON with identifications, tags and topology.
std::string mesh_sidecar_json(const SurfaceMesh& mesh, int k, int n_alpha, int n_beta);

}  // namespace spherevol
