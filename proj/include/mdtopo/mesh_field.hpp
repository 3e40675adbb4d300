#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mdtopo {

using Point3 = std::array<double, 3>;

// Undirected edge with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

// Triangulation carrier. Simplices of any dimension up to 3 may be given;
// the edge graph is the union of all their 1-faces.
struct SimplicialMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::array<std::size_t, 4>> tetrahedra;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t simplex_count() const { return edges.size() + triangles.size() + tetrahedra.size(); }

  // Sorted, duplicate-free list of 1-faces.
  std::vector<Edge> edge_graph() const;

  // Throws InputError on out-of-range indices or degenerate simplices.
  void validate() const;
};

// nx * ny * nz vertices with unit spacing and 6-neighbourhood adjacency.
// Vertex (x, y, z) has index x + nx * (y + ny * z).
struct RegularGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t vertex_count() const { return nx * ny * nz; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return x + nx * (y + ny * z); }
  std::vector<Edge> edge_graph() const;
};

struct VertexField {
  std::string name;
  std::vector<double> values;
};

using Carrier = std::variant<SimplicialMesh, RegularGrid>;

// n aligned per-vertex scalar fields on a common carrier. The order of
// `fields` is the field ordering used by every downstream stage.
struct MultiField {
  Carrier carrier;
  std::vector<VertexField> fields;

  std::size_t vertex_count() const;
  std::size_t field_count() const { return fields.size(); }
  std::vector<Edge> carrier_edges() const;

  // n >= 1, every field has vertex_count() finite values.
  void validate() const;

  // Fields permuted so that result.fields[i] = fields[order[i]].
  MultiField reordered(std::span<const std::size_t> order) const;
};

struct GridData {
  RegularGrid grid;
  std::vector<VertexField> fields;
};

SimplicialMesh parse_off(std::istream& in);
SimplicialMesh load_mesh(const std::filesystem::path& path);

// Text header `GRID nx ny nz nfields` followed by whitespace separated
// values, one full field after another.
GridData parse_grid(std::istream& in);
GridData load_grid(const std::filesystem::path& path);

// `vertex_id,value` lines; an optional non-numeric header line is skipped.
// Every vertex id in [0, vertex_count) must appear exactly once.
VertexField parse_field_csv(std::istream& in, std::size_t vertex_count, std::string name);
VertexField load_field_csv(const std::filesystem::path& path, std::size_t vertex_count);
void write_field_csv(std::ostream& out, const VertexField& field);

// One third of the total area of the triangles incident to each vertex.
// Meshes without triangles (pure edge graphs) get unit weights.
std::vector<double> vertex_area_weights(const SimplicialMesh& mesh);

// Min-max scaling to [0, 1]; a constant input maps to all zeros.
std::vector<double> normalize_unit(std::span<const double> raw);

// Area-weighted sum of edge-graph shortest-path distances to all vertices,
// min-max normalised. Throws InputError if the edge graph is disconnected.
// The `raw` overloads skip normalisation.
VertexField geodesic_field(const SimplicialMesh& mesh, unsigned jobs = 1);
std::vector<double> geodesic_field_raw(const SimplicialMesh& mesh, unsigned jobs = 1);

// Area-weighted sum of straight-line distances to all vertices, min-max
// normalised. Throws InputError for fewer than two vertices.
VertexField euclidean_field(const SimplicialMesh& mesh, unsigned jobs = 1);
std::vector<double> euclidean_field_raw(const SimplicialMesh& mesh, unsigned jobs = 1);

}  // namespace mdtopo
