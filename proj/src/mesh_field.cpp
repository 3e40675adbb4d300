#include "mdtopo/mesh_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "mdtopo/error.hpp"
#include "mdtopo/parallel.hpp"

namespace mdtopo {

namespace {

Edge make_edge(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

// Next token that is not part of a '#' comment.
bool next_token(std::istream& in, std::string& token) {
  while (in >> token) {
    if (token[0] != '#') return true;
    std::string rest;
    std::getline(in, rest);
  }
  return false;
}

template <typename T>
T read_number(std::istream& in, const char* what) {
  std::string token;
  if (!next_token(in, token)) throw InputError(std::string("unexpected end of input reading ") + what);
  std::istringstream ss(token);
  T value{};
  ss >> value;
  if (!ss || !ss.eof()) throw InputError(std::string("cannot parse ") + what + " from '" + token + "'");
  return value;
}

double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double cx = uy * vz - uz * vy;
  const double cy = uz * vx - ux * vz;
  const double cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace

std::vector<Edge> SimplicialMesh::edge_graph() const {
  std::vector<Edge> out;
  out.reserve(edges.size() + 3 * triangles.size() + 6 * tetrahedra.size());
  for (const auto& e : edges) out.push_back(make_edge(e[0], e[1]));
  for (const auto& t : triangles) {
    out.push_back(make_edge(t[0], t[1]));
    out.push_back(make_edge(t[1], t[2]));
    out.push_back(make_edge(t[0], t[2]));
  }
  for (const auto& t : tetrahedra) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) out.push_back(make_edge(t[i], t[j]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SimplicialMesh::validate() const {
  const std::size_t n = vertices.size();
  auto check = [&](std::span<const std::size_t> s, const char* kind) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= n)
        throw InputError(std::string(kind) + " references vertex " + std::to_string(s[i]) + " but mesh has " +
                         std::to_string(n) + " vertices");
      for (std::size_t j = 0; j < i; ++j)
        if (s[i] == s[j]) throw InputError(std::string(kind) + " repeats vertex " + std::to_string(s[i]));
    }
  };
  for (const auto& e : edges) check(e, "edge");
  for (const auto& t : triangles) check(t, "triangle");
  for (const auto& t : tetrahedra) check(t, "tetrahedron");
  for (const auto& p : vertices)
    for (double c : p)
      if (!std::isfinite(c)) throw InputError("non-finite vertex coordinate");
}

std::vector<Edge> RegularGrid::edge_graph() const {
  std::vector<Edge> out;
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t v = index(x, y, z);
        if (x + 1 < nx) out.emplace_back(v, index(x + 1, y, z));
        if (y + 1 < ny) out.emplace_back(v, index(x, y + 1, z));
        if (z + 1 < nz) out.emplace_back(v, index(x, y, z + 1));
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t MultiField::vertex_count() const {
  return std::visit([](const auto& c) { return c.vertex_count(); }, carrier);
}

std::vector<Edge> MultiField::carrier_edges() const {
  return std::visit([](const auto& c) { return c.edge_graph(); }, carrier);
}

void MultiField::validate() const {
  if (fields.empty()) throw InputError("multi-field has no component fields");
  if (const auto* mesh = std::get_if<SimplicialMesh>(&carrier)) mesh->validate();
  const std::size_t n = vertex_count();
  for (const auto& f : fields) {
    if (f.values.size() != n)
      throw InputError("field '" + f.name + "' has " + std::to_string(f.values.size()) + " values, carrier has " +
                       std::to_string(n) + " vertices");
    for (double v : f.values)
      if (!std::isfinite(v)) throw InputError("field '" + f.name + "' has a non-finite value");
  }
}

MultiField MultiField::reordered(std::span<const std::size_t> order) const {
  if (order.size() != fields.size()) throw ConfigError("field order must list every field exactly once");
  std::vector<bool> seen(fields.size(), false);
  MultiField out{carrier, {}};
  for (std::size_t i : order) {
    if (i >= fields.size() || seen[i]) throw ConfigError("field order must be a permutation of 0.." +
                                                         std::to_string(fields.size() - 1));
    seen[i] = true;
    out.fields.push_back(fields[i]);
  }
  return out;
}

SimplicialMesh parse_off(std::istream& in) {
  std::string token;
  if (!next_token(in, token)) throw InputError("empty OFF input");
  std::size_t nv = 0;
  if (token == "OFF") {
    nv = read_number<std::size_t>(in, "vertex count");
  } else if (token.rfind("OFF", 0) == 0) {
    throw InputError("unsupported OFF variant '" + token + "'");
  } else {
    // Header keyword is optional in some writers.
    std::istringstream ss(token);
    if (!(ss >> nv)) throw InputError("missing OFF header");
  }
  const auto nf = read_number<std::size_t>(in, "face count");
  read_number<std::size_t>(in, "edge count");

  SimplicialMesh mesh;
  mesh.vertices.resize(nv);
  for (auto& p : mesh.vertices)
    for (auto& c : p) c = read_number<double>(in, "vertex coordinate");
  mesh.triangles.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto k = read_number<std::size_t>(in, "face size");
    if (k != 3) throw InputError("face " + std::to_string(f) + " has " + std::to_string(k) + " vertices; only triangles are supported");
    std::array<std::size_t, 3> t{};
    for (auto& i : t) i = read_number<std::size_t>(in, "face index");
    // Anything else on the line (per-face colour) is ignored.
    std::string rest;
    std::getline(in, rest);
    mesh.triangles.push_back(t);
  }
  if (mesh.triangles.empty()) throw InputError("no simplices");
  mesh.validate();
  return mesh;
}

SimplicialMesh load_mesh(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_off(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

GridData parse_grid(std::istream& in) {
  std::string token;
  if (!next_token(in, token) || token != "GRID") throw InputError("missing GRID header");
  GridData out;
  out.grid.nx = read_number<std::size_t>(in, "nx");
  out.grid.ny = read_number<std::size_t>(in, "ny");
  out.grid.nz = read_number<std::size_t>(in, "nz");
  const auto nfields = read_number<std::size_t>(in, "field count");
  const std::size_t n = out.grid.vertex_count();
  if (n == 0) throw InputError("grid has no vertices");
  if (nfields == 0) throw InputError("grid declares no fields");

  std::vector<double> values;
  values.reserve(n * nfields);
  while (next_token(in, token)) {
    std::istringstream ss(token);
    double v = 0;
    ss >> v;
    if (!ss || !ss.eof()) throw InputError("cannot parse grid value '" + token + "'");
    values.push_back(v);
  }
  if (values.size() != n * nfields)
    throw InputError("grid header declares " + std::to_string(n * nfields) + " values (" + std::to_string(out.grid.nx) +
                     "x" + std::to_string(out.grid.ny) + "x" + std::to_string(out.grid.nz) + " x " +
                     std::to_string(nfields) + " fields) but " + std::to_string(values.size()) + " were found");
  for (std::size_t f = 0; f < nfields; ++f) {
    VertexField field{"f" + std::to_string(f), {}};
    field.values.assign(values.begin() + static_cast<std::ptrdiff_t>(f * n),
                        values.begin() + static_cast<std::ptrdiff_t>((f + 1) * n));
    for (double v : field.values)
      if (!std::isfinite(v)) throw InputError("grid field " + std::to_string(f) + " has a non-finite value");
    out.fields.push_back(std::move(field));
  }
  return out;
}

GridData load_grid(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_grid(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

VertexField parse_field_csv(std::istream& in, std::size_t vertex_count, std::string name) {
  VertexField field{std::move(name), std::vector<double>(vertex_count, 0.0)};
  std::vector<bool> seen(vertex_count, false);
  std::string line;
  std::size_t line_no = 0;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected vertex_id,value");
    std::istringstream id_ss(line.substr(0, comma));
    std::istringstream val_ss(line.substr(comma + 1));
    std::size_t id = 0;
    double value = 0;
    if (!(id_ss >> id)) {
      if (line_no == 1) continue;  // header
      throw InputError("line " + std::to_string(line_no) + ": bad vertex id");
    }
    if (!(val_ss >> value) || !std::isfinite(value))
      throw InputError("line " + std::to_string(line_no) + ": bad value");
    if (id >= vertex_count) throw InputError("line " + std::to_string(line_no) + ": vertex id out of range");
    if (seen[id]) throw InputError("line " + std::to_string(line_no) + ": duplicate vertex id");
    seen[id] = true;
    field.values[id] = value;
    ++count;
  }
  if (count != vertex_count)
    throw InputError("field has " + std::to_string(count) + " values, carrier has " + std::to_string(vertex_count) +
                     " vertices");
  return field;
}

VertexField load_field_csv(const std::filesystem::path& path, std::size_t vertex_count) {
  auto in = open_input(path);
  try {
    return parse_field_csv(in, vertex_count, path.stem().string());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_field_csv(std::ostream& out, const VertexField& field) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "vertex_id,value\n";
  for (std::size_t i = 0; i < field.values.size(); ++i) out << i << ',' << field.values[i] << '\n';
  out.precision(old_precision);
}

std::vector<double> vertex_area_weights(const SimplicialMesh& mesh) {
  std::vector<double> w(mesh.vertex_count(), 0.0);
  double total = 0;
  for (const auto& t : mesh.triangles) {
    const double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    for (std::size_t i : t) w[i] += a / 3.0;
    total += a;
  }
  if (total <= 0) std::fill(w.begin(), w.end(), 1.0);
  return w;
}

std::vector<double> normalize_unit(std::span<const double> raw) {
  std::vector<double> out(raw.size(), 0.0);
  if (raw.empty()) return out;
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo;
  const double range = *hi - min;
  // Spreads at rounding level count as a constant field.
  const double scale = std::max(std::fabs(min), std::fabs(*hi));
  if (!(range > 1e-12 * scale)) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = std::clamp((raw[i] - min) / range, 0.0, 1.0);
  return out;
}

std::vector<double> geodesic_field_raw(const SimplicialMesh& mesh, unsigned jobs) {
  mesh.validate();
  const std::size_t n = mesh.vertex_count();
  if (n == 0) throw InputError("mesh has no vertices");
  const auto weights = vertex_area_weights(mesh);

  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& [a, b] : mesh.edge_graph()) {
    const double len = distance(mesh.vertices[a], mesh.vertices[b]);
    adj[a].emplace_back(b, len);
    adj[b].emplace_back(a, len);
  }

  std::vector<double> raw(n, 0.0);
  std::vector<char> disconnected(n, 0);
  parallel_for(n, jobs, [&](std::size_t source) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, len] : adj[u]) {
        const double nd = d + len;
        if (nd < dist[v]) {
          dist[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
    double sum = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (dist[u] == inf) {
        disconnected[source] = 1;
        return;
      }
      sum += dist[u] * weights[u];
    }
    raw[source] = sum;
  });
  if (std::find(disconnected.begin(), disconnected.end(), 1) != disconnected.end())
    throw InputError("mesh edge graph is disconnected; geodesic distances undefined");
  return raw;
}

VertexField geodesic_field(const SimplicialMesh& mesh, unsigned jobs) {
  const auto raw = geodesic_field_raw(mesh, jobs);
  return {"geodesic", normalize_unit(raw)};
}

std::vector<double> euclidean_field_raw(const SimplicialMesh& mesh, unsigned jobs) {
  mesh.validate();
  const std::size_t n = mesh.vertex_count();
  if (n < 2) throw InputError("euclidean field needs at least two vertices");
  const auto weights = vertex_area_weights(mesh);
  std::vector<double> raw(n, 0.0);
  parallel_for(n, jobs, [&](std::size_t v) {
    double sum = 0;
    for (std::size_t u = 0; u < n; ++u) sum += distance(mesh.vertices[v], mesh.vertices[u]) * weights[u];
    raw[v] = sum;
  });
  return raw;
}

VertexField euclidean_field(const SimplicialMesh& mesh, unsigned jobs) {
  const auto raw = euclidean_field_raw(mesh, jobs);
  return {"euclidean", normalize_unit(raw)};
}

}  // namespace mdtopo
