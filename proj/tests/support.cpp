#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mdtopo/union_find.hpp"

namespace oracle {

using namespace mdtopo;

ReebGraph make_graph(const std::vector<double>& values, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  ReebGraph rg;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ReebNode n;
    n.value = values[i];
    n.members = {i};
    n.origin = i;
    rg.nodes.push_back(n);
  }
  for (auto [a, b] : arcs) {
    if (a == b) throw std::invalid_argument("self loop");
    rg.arcs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(rg.arcs.begin(), rg.arcs.end());
  rg.arcs.erase(std::unique(rg.arcs.begin(), rg.arcs.end()), rg.arcs.end());
  return rg;
}

ReebGraph random_resolved_graph(std::mt19937_64& rng, std::size_t max_nodes) {
  for (;;) {
    std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, max_nodes - 2));
    const std::size_t n = count(rng);
    std::uniform_int_distribution<int> value(0, 6);
    std::vector<double> values(n);
    for (auto& v : values) v = value(rng);
    std::bernoulli_distribution keep(std::uniform_real_distribution<double>(0.15, 0.6)(rng));
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (keep(rng)) arcs.emplace_back(a, b);
    ReebGraph rg = resolve_degeneracies(make_graph(values, arcs), 0.01);
    if (rg.node_count() <= max_nodes) return rg;
  }
}

PersistenceDiagram dense_extended_persistence(const ReebGraph& rg) {
  const std::size_t n = rg.node_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(rg.nodes[a].value, a) < std::make_pair(rg.nodes[b].value, b);
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

  UnionFind uf(n);
  for (auto [a, b] : rg.arcs) uf.unite(a, b);
  std::size_t ncomp = 0;
  const auto comp = component_labels(uf, &ncomp);

  // type: 0 vertex, 1 edge, 2 apex, 3 cone vertex, 4 cone edge
  struct Cell {
    int type;
    std::size_t lo, hi;  // node ranks (lo == hi for vertices); comp id for apexes
    std::vector<long> key;
  };
  std::vector<Cell> cells;
  const long N = static_cast<long>(n);
  for (std::size_t v = 0; v < n; ++v) {
    const long r = static_cast<long>(rank[v]);
    cells.push_back({0, rank[v], rank[v], {0, r, 0, r}});
    cells.push_back({3, rank[v], rank[v], {2, N - 1 - r, 0, N - 1 - r}});
  }
  for (auto [a, b] : rg.arcs) {
    const long lo = static_cast<long>(std::min(rank[a], rank[b]));
    const long hi = static_cast<long>(std::max(rank[a], rank[b]));
    cells.push_back({1, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), {0, hi, 1, lo}});
    cells.push_back({4, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), {2, N - 1 - lo, 1, N - 1 - hi}});
  }
  for (std::size_t c = 0; c < ncomp; ++c) cells.push_back({2, c, c, {1, static_cast<long>(c), 0, 0}});
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.key < y.key; });

  const std::size_t m = cells.size();
  std::map<std::tuple<int, std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index[{cells[i].type, cells[i].lo, cells[i].hi}] = i;
  auto comp_of_rank = [&](std::size_t r) { return comp[order[r]]; };

  std::vector<std::vector<char>> col(m, std::vector<char>(m, 0));
  for (std::size_t j = 0; j < m; ++j) {
    const Cell& c = cells[j];
    switch (c.type) {
      case 1:
        col[j][index.at({0, c.lo, c.lo})] ^= 1;
        col[j][index.at({0, c.hi, c.hi})] ^= 1;
        break;
      case 3: {
        const std::size_t k = comp_of_rank(c.lo);
        col[j][index.at({2, k, k})] ^= 1;
        col[j][index.at({0, c.lo, c.lo})] ^= 1;
        break;
      }
      case 4:
        col[j][index.at({1, c.lo, c.hi})] ^= 1;
        col[j][index.at({3, c.lo, c.lo})] ^= 1;
        col[j][index.at({3, c.hi, c.hi})] ^= 1;
        break;
      default:
        break;
    }
  }
  auto low = [&](std::size_t j) -> long {
    for (std::size_t i = m; i-- > 0;)
      if (col[j][i]) return static_cast<long>(i);
    return -1;
  };
  std::vector<long> lows(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    for (;;) {
      const long l = low(j);
      if (l < 0) break;
      bool reduced = false;
      for (std::size_t k = 0; k < j; ++k) {
        if (lows[k] == l) {
          for (std::size_t i = 0; i < m; ++i) col[j][i] ^= col[k][i];
          reduced = true;
          break;
        }
      }
      if (!reduced) break;
    }
    lows[j] = low(j);
  }

  PersistenceDiagram pd;
  auto value = [&](std::size_t r) { return rg.nodes[order[r]].value; };
  auto add = [&](std::size_t b, std::size_t d, PointKind kind) {
    PersistencePoint p;
    p.birth = value(b);
    p.death = value(d);
    p.kind = kind;
    p.dim = kind == PointKind::Extended1 ? 1 : 0;
    p.birth_node = order[b];
    p.death_node = order[d];
    pd.points.push_back(p);
  };
  // Lowest rank of every component.
  std::vector<std::size_t> comp_min(ncomp, std::numeric_limits<std::size_t>::max());
  for (std::size_t r = 0; r < n; ++r) comp_min[comp_of_rank(r)] = std::min(comp_min[comp_of_rank(r)], r);

  for (std::size_t j = 0; j < m; ++j) {
    if (lows[j] < 0) continue;
    const Cell& b = cells[static_cast<std::size_t>(lows[j])];
    const Cell& d = cells[j];
    if (b.type == 0 && d.type == 1) {
      if (b.lo != d.hi) add(b.lo, d.hi, PointKind::Ordinary0);
    } else if (b.type == 2 && d.type == 3) {
      add(comp_min[b.lo], d.lo, PointKind::Extended0);
    } else if (b.type == 1 && d.type == 4) {
      add(b.hi, d.lo, PointKind::Extended1);
    } else if (b.type == 3 && d.type == 4) {
      if (b.lo != d.lo) add(d.lo, b.lo, PointKind::Ordinary0);
    } else {
      throw std::logic_error("unexpected pair in oracle reduction");
    }
  }
  return pd;
}

std::vector<PointKey> sorted_points(const PersistenceDiagram& pd) {
  std::vector<PointKey> out;
  for (const auto& p : pd.points) out.emplace_back(static_cast<int>(p.kind), p.birth, p.death);
  std::sort(out.begin(), out.end());
  return out;
}

double brute_force_assignment(const CostMatrix& c) {
  const std::size_t k = c.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) s += c(i, perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return k == 0 ? 0.0 : best;
}

namespace {

double linf(const MdpdPoint& x, const MdpdPoint& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.factors.size(); ++i) {
    d = std::max(d, std::fabs(x.factors[i].birth - y.factors[i].birth));
    d = std::max(d, std::fabs(x.factors[i].death - y.factors[i].death));
  }
  return d;
}

double to_diagonal(const MdpdPoint& x) {
  double d = 0;
  for (const auto& f : x.factors) d = std::max(d, std::fabs(f.death - f.birth) / 2);
  return d;
}

using Prefix = std::vector<std::size_t>;

struct Search {
  const Mdpd& f;
  const Mdpd& g;
  double q;
  std::vector<int> used;
  // per depth: prefix of f node path <-> prefix of g node path
  std::vector<std::map<Prefix, Prefix>> fwd, bwd;
  std::vector<std::map<Prefix, int>> fwd_count;
  double best = std::numeric_limits<double>::infinity();

  Prefix prefix(const MdpdPoint& p, std::size_t depth) const {
    return Prefix(p.node_path.begin(), p.node_path.begin() + static_cast<long>(depth + 1));
  }

  bool admissible(const MdpdPoint& x, const MdpdPoint& y) const {
    if (x.level_path != y.level_path) return false;
    if (x.dims() != y.dims()) return false;
    for (std::size_t d = 0; d < x.node_path.size(); ++d) {
      const auto px = prefix(x, d), py = prefix(y, d);
      auto it = fwd[d].find(px);
      if (it != fwd[d].end() && it->second != py) return false;
      auto jt = bwd[d].find(py);
      if (jt != bwd[d].end() && jt->second != px) return false;
    }
    return true;
  }

  void link(const MdpdPoint& x, const MdpdPoint& y, int delta) {
    for (std::size_t d = 0; d < x.node_path.size(); ++d) {
      const auto px = prefix(x, d), py = prefix(y, d);
      int& c = fwd_count[d][px];
      if (delta > 0) {
        if (c++ == 0) {
          fwd[d][px] = py;
          bwd[d][py] = px;
        }
      } else if (--c == 0) {
        fwd[d].erase(px);
        bwd[d].erase(py);
      }
    }
  }

  void run(std::size_t i, double cost) {
    if (i == f.points.size()) {
      for (std::size_t j = 0; j < g.points.size(); ++j)
        if (!used[j]) cost += std::pow(to_diagonal(g.points[j]), q);
      best = std::min(best, cost);
      return;
    }
    const MdpdPoint& x = f.points[i];
    run(i + 1, cost + std::pow(to_diagonal(x), q));
    for (std::size_t j = 0; j < g.points.size(); ++j) {
      if (used[j] || !admissible(x, g.points[j])) continue;
      used[j] = 1;
      link(x, g.points[j], +1);
      run(i + 1, cost + std::pow(linf(x, g.points[j]), q));
      link(x, g.points[j], -1);
      used[j] = 0;
    }
  }
};

}  // namespace

double brute_force_distance(const Mdpd& f, const Mdpd& g, double q) {
  const std::size_t depth = f.field_count() - 1;
  Search s{f, g, q, std::vector<int>(g.points.size(), 0), std::vector<std::map<Prefix, Prefix>>(depth),
           std::vector<std::map<Prefix, Prefix>>(depth), std::vector<std::map<Prefix, int>>(depth)};
  s.run(0, 0.0);
  return std::pow(s.best, 1.0 / q);
}

Scores ranking_oracle(const DistanceMatrix& m, const std::vector<std::string>& labels, std::size_t e_k) {
  const std::size_t n = m.size();
  Scores total{0, 0, 0, 0, 0};
  std::size_t queries = 0;
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t class_size = 0;
    for (const auto& l : labels) class_size += l == labels[q];
    const std::size_t rel = class_size - 1;
    if (rel == 0) continue;
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t j = 0; j < n; ++j)
      if (j != q) ranked.emplace_back(m(q, j), j);
    std::sort(ranked.begin(), ranked.end());
    std::vector<int> g;
    for (const auto& r : ranked) g.push_back(labels[r.second] == labels[q] ? 1 : 0);

    auto top = [&](std::size_t k) {
      double h = 0;
      for (std::size_t i = 0; i < k && i < g.size(); ++i) h += g[i];
      return h;
    };
    total.nn += g[0];
    total.ft += top(rel) / rel;
    total.st += top(2 * rel) / rel;
    const std::size_t k = std::min(e_k, g.size());
    const double p = top(k) / k, r = top(k) / rel;
    if (p + r > 0) total.e += 2 * p * r / (p + r);
    double dcg = g[0];
    for (std::size_t i = 2; i <= g.size(); ++i) dcg += g[i - 1] / std::log2(static_cast<double>(i));
    double ideal = 1;
    for (std::size_t i = 2; i <= rel; ++i) ideal += 1 / std::log2(static_cast<double>(i));
    total.dcg += dcg / ideal;
    ++queries;
  }
  if (queries > 0) {
    const double c = static_cast<double>(queries);
    total.nn /= c;
    total.ft /= c;
    total.st /= c;
    total.e /= c;
    total.dcg /= c;
  }
  return total;
}

MultiField random_grid(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t nfields) {
  MultiField mf{RegularGrid{nx, ny, 1}, {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t f = 0; f < nfields; ++f) {
    VertexField field{"f" + std::to_string(f), std::vector<double>(nx * ny)};
    for (auto& v : field.values) v = u(rng);
    mf.fields.push_back(std::move(field));
  }
  return mf;
}

MultiField smooth_random_grid(std::mt19937_64& rng, std::size_t nx, std::size_t ny, std::size_t nfields) {
  MultiField mf{RegularGrid{nx, ny, 1}, {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t f = 0; f < nfields; ++f) {
    std::vector<std::array<double, 4>> bumps(4);
    for (auto& b : bumps) b = {u(rng) * nx, u(rng) * ny, 1.0 + 2.0 * u(rng), u(rng) * 2 - 1};
    VertexField field{"f" + std::to_string(f), std::vector<double>(nx * ny)};
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x) {
        double s = 0;
        for (const auto& b : bumps) {
          const double dx = x - b[0], dy = y - b[1];
          s += b[3] * std::exp(-(dx * dx + dy * dy) / (2 * b[2] * b[2]));
        }
        field.values[x + nx * y] = s;
      }
    field.values = normalize_unit(field.values);
    mf.fields.push_back(std::move(field));
  }
  return mf;
}

SimplicialMesh implicit_surface(const std::function<double(double, double, double)>& f, std::array<double, 3> half,
                                double h) {
  std::array<std::size_t, 3> n{};
  std::array<double, 3> origin{};
  for (int a = 0; a < 3; ++a) {
    n[a] = static_cast<std::size_t>(std::ceil(2 * half[a] / h)) + 1;
    origin[a] = -half[a] + 0.0137 * h;
  }
  auto id = [&](std::size_t x, std::size_t y, std::size_t z) { return x + n[0] * (y + n[1] * z); };
  auto pos = [&](std::size_t i) {
    const std::size_t x = i % n[0], y = (i / n[0]) % n[1], z = i / (n[0] * n[1]);
    return Point3{origin[0] + x * h, origin[1] + y * h, origin[2] + z * h};
  };
  std::vector<double> value(n[0] * n[1] * n[2]);
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Point3 p = pos(i);
    value[i] = f(p[0], p[1], p[2]);
  }

  SimplicialMesh mesh;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_vertex;
  auto crossing = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    auto [it, inserted] = edge_vertex.try_emplace({a, b}, mesh.vertices.size());
    if (inserted) {
      const double t = value[a] / (value[a] - value[b]);
      const Point3 pa = pos(a), pb = pos(b);
      mesh.vertices.push_back({pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]), pa[2] + t * (pb[2] - pa[2])});
    }
    return it->second;
  };
  static constexpr int tets[6][4] = {{0, 1, 3, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 6, 7}, {0, 4, 5, 7}, {0, 1, 5, 7}};
  for (std::size_t z = 0; z + 1 < n[2]; ++z)
    for (std::size_t y = 0; y + 1 < n[1]; ++y)
      for (std::size_t x = 0; x + 1 < n[0]; ++x) {
        std::array<std::size_t, 8> corner{};
        for (int c = 0; c < 8; ++c) corner[c] = id(x + (c & 1), y + ((c >> 1) & 1), z + ((c >> 2) & 1));
        for (const auto& t : tets) {
          std::vector<std::size_t> in, out;
          for (int k = 0; k < 4; ++k) (value[corner[t[k]]] < 0 ? in : out).push_back(corner[t[k]]);
          if (in.size() == 1 || in.size() == 3) {
            const auto& lone = in.size() == 1 ? in : out;
            const auto& rest = in.size() == 1 ? out : in;
            mesh.triangles.push_back({crossing(lone[0], rest[0]), crossing(lone[0], rest[1]), crossing(lone[0], rest[2])});
          } else if (in.size() == 2) {
            const std::size_t q0 = crossing(in[0], out[0]), q1 = crossing(in[0], out[1]);
            const std::size_t q2 = crossing(in[1], out[1]), q3 = crossing(in[1], out[0]);
            mesh.triangles.push_back({q0, q1, q2});
            mesh.triangles.push_back({q0, q2, q3});
          }
        }
      }
  return mesh;
}

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Sphere: return "sphere";
    case Shape::Torus: return "torus";
    case Shape::DoubleTorus: return "double_torus";
  }
  return "?";
}

namespace {

double torus(double x, double y, double z, double cx, double big, double small) {
  const double d = std::hypot(x - cx, y) - big;
  return d * d + z * z - small * small;
}

}  // namespace

SimplicialMesh shape_mesh(Shape s, std::size_t target_faces) {
  std::function<double(double, double, double)> f;
  std::array<double, 3> half{};
  switch (s) {
    case Shape::Sphere:
      f = [](double x, double y, double z) { return x * x + y * y + z * z - 1.0; };
      half = {1.2, 1.2, 1.2};
      break;
    case Shape::Torus:
      f = [](double x, double y, double z) { return torus(x, y, z, 0.0, 1.0, 0.45); };
      half = {1.6, 1.6, 0.6};
      break;
    case Shape::DoubleTorus:
      f = [](double x, double y, double z) {
        return std::min(torus(x, y, z, -1.15, 1.0, 0.45), torus(x, y, z, 1.15, 1.0, 0.45));
      };
      half = {2.75, 1.6, 0.6};
      break;
  }
  SimplicialMesh best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (double h = 0.05; h <= 0.3; h *= 1.04) {
    SimplicialMesh m = implicit_surface(f, half, h);
    const double gap = std::fabs(static_cast<double>(m.triangles.size()) - static_cast<double>(target_faces));
    if (gap < best_gap) {
      best_gap = gap;
      best = std::move(m);
    }
  }
  return best;
}

void jitter(SimplicialMesh& mesh, std::mt19937_64& rng, double fraction) {
  Point3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  Point3 hi{-lo[0], -lo[1], -lo[2]};
  for (const auto& p : mesh.vertices)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  const double diag = std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                (hi[2] - lo[2]) * (hi[2] - lo[2]));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double amp = fraction * diag / std::sqrt(3.0);
  for (auto& p : mesh.vertices)
    for (auto& c : p) c += amp * u(rng);
}

}  // namespace oracle
