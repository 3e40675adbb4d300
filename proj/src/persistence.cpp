#include "mdtopo/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mdtopo/error.hpp"
#include "mdtopo/union_find.hpp"

namespace mdtopo {

std::string_view to_string(PointKind kind) {
  switch (kind) {
    case PointKind::Ordinary0: return "ordinary0";
    case PointKind::Extended0: return "extended0";
    case PointKind::Extended1: return "extended1";
  }
  return "?";
}

std::string_view to_string(Sweep sweep) { return sweep == Sweep::Sublevel ? "sublevel" : "superlevel"; }

PointKind parse_point_kind(std::string_view s) {
  if (s == "ordinary0") return PointKind::Ordinary0;
  if (s == "extended0") return PointKind::Extended0;
  if (s == "extended1") return PointKind::Extended1;
  throw InputError("unknown point kind '" + std::string(s) + "'");
}

int dim_of(PointKind kind) { return kind == PointKind::Extended1 ? 1 : 0; }

bool node_less(const ReebGraph& rg, std::size_t a, std::size_t b) {
  const double va = rg.nodes[a].value, vb = rg.nodes[b].value;
  if (va != vb) return va < vb;
  return a < b;
}

std::vector<NodeDegree> node_degrees(const ReebGraph& rg) {
  std::vector<NodeDegree> deg(rg.node_count());
  for (const auto& [a, b] : rg.arcs) {
    if (node_less(rg, a, b)) {
      ++deg[a].up;
      ++deg[b].down;
    } else {
      ++deg[b].up;
      ++deg[a].down;
    }
  }
  return deg;
}

bool is_simple_degree(NodeDegree d) {
  if (d.up == 0 && d.down == 0) return true;
  if (d.up == 1 && d.down <= 2) return true;
  return d.down == 1 && d.up <= 2;
}

std::size_t critical_node_count(const ReebGraph& rg) {
  std::size_t count = 0;
  for (const auto& d : node_degrees(rg))
    if (!(d.up == 1 && d.down == 1)) ++count;
  return count;
}

double default_epsilon(const ReebGraph& rg) {
  std::vector<double> values;
  for (const auto& n : rg.nodes) values.push_back(n.value);
  std::sort(values.begin(), values.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) gap = std::min(gap, values[i] - values[i - 1]);
  return std::isfinite(gap) ? 1e-6 * gap : 1e-6;
}

ReebGraph resolve_degeneracies(const ReebGraph& rg, double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  const std::size_t n = rg.node_count();
  const auto deg = node_degrees(rg);
  const auto adj = rg.adjacency();

  ReebGraph out;
  out.field_index = rg.field_index;
  out.nodes = rg.nodes;
  std::vector<std::size_t> chain_pos(n, 0);
  for (std::size_t i = 0; i < n; ++i) out.nodes[i].origin = i;

  // attach[i] maps a neighbour of i to the chain node of i that carries the arc.
  std::vector<std::map<std::size_t, std::size_t>> attach(n);
  std::vector<Edge> arcs;

  for (std::size_t i = 0; i < n; ++i) {
    if (is_simple_degree(deg[i])) {
      for (std::size_t j : adj[i]) attach[i][j] = i;
      continue;
    }
    std::vector<std::size_t> down, up;
    for (std::size_t j : adj[i]) (node_less(rg, j, i) ? down : up).push_back(j);
    auto by_order = [&](std::size_t a, std::size_t b) { return node_less(rg, a, b); };
    std::sort(down.begin(), down.end(), by_order);
    std::sort(up.begin(), up.end(), by_order);
    const std::size_t d = down.size(), u = up.size();

    const std::size_t merges = d >= 2 ? d - 1 : 0;
    const std::size_t splits = u >= 2 ? u - 1 : 0;
    const std::size_t length = (d == 0 ? 1 : 0) + merges + splits + (u == 0 ? 1 : 0);
    std::vector<std::size_t> chain{i};
    for (std::size_t k = 1; k < length; ++k) {
      chain.push_back(out.nodes.size());
      ReebNode extra = rg.nodes[i];
      extra.origin = i;
      out.nodes.push_back(std::move(extra));
      chain_pos.push_back(k);
    }
    for (std::size_t k = 0; k + 1 < length; ++k) arcs.emplace_back(chain[k], chain[k + 1]);

    const std::size_t first_merge = d == 0 ? 1 : 0;
    const std::size_t first_split = first_merge + merges;
    if (merges > 0) {
      attach[i][down[0]] = chain[first_merge];
      for (std::size_t k = 0; k < merges; ++k) attach[i][down[k + 1]] = chain[first_merge + k];
    } else if (d == 1) {
      attach[i][down[0]] = chain[first_split];
    }
    if (splits > 0) {
      for (std::size_t k = 0; k < splits; ++k) attach[i][up[k]] = chain[first_split + k];
      attach[i][up[splits]] = chain[first_split + splits - 1];
    } else if (u == 1) {
      attach[i][up[0]] = chain[first_split - 1];
    }
  }
  for (const auto& [a, b] : rg.arcs) arcs.emplace_back(attach[a].at(b), attach[b].at(a));
  for (auto& [a, b] : arcs)
    if (a > b) std::swap(a, b);
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  out.arcs = std::move(arcs);

  // Spread nodes sharing a value: order by origin, then chain position.
  std::vector<std::size_t> order(out.node_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& na = out.nodes[a];
    const auto& nb = out.nodes[b];
    if (na.value != nb.value) return na.value < nb.value;
    if (na.origin != nb.origin) return na.origin < nb.origin;
    return chain_pos[a] < chain_pos[b];
  });
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t longest_run = 1;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    while (e < order.size() && out.nodes[order[e]].value == out.nodes[order[s]].value) ++e;
    longest_run = std::max(longest_run, e - s);
    if (e < order.size()) min_gap = std::min(min_gap, out.nodes[order[e]].value - out.nodes[order[s]].value);
    s = e;
  }
  if (std::isfinite(min_gap) && (2 * epsilon >= min_gap || (longest_run - 1) * epsilon >= min_gap))
    throw ConfigError("epsilon " + std::to_string(epsilon) + " is too large for value gap " + std::to_string(min_gap));
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    const double base = out.nodes[order[s]].value;
    while (e < order.size() && out.nodes[order[e]].value == base) ++e;
    for (std::size_t k = s; k < e; ++k) out.nodes[order[k]].value = base + static_cast<double>(k - s) * epsilon;
    s = e;
  }

  for (const auto& d : node_degrees(out))
    if (!is_simple_degree(d)) throw std::logic_error("degeneracy resolution left a non-simple node");
  return out;
}

namespace {

// Z2 column reduction with sorted sparse columns; returns low(j) or npos.
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::vector<std::size_t> reduce_columns(std::vector<std::vector<std::size_t>>& cols) {
  std::vector<std::size_t> low(cols.size(), npos);
  std::vector<std::size_t> owner(cols.size(), npos);  // row -> column whose low it is
  std::vector<std::size_t> scratch;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto& c = cols[j];
    while (!c.empty()) {
      const std::size_t l = c.back();
      const std::size_t k = owner[l];
      if (k == npos) break;
      scratch.clear();
      std::set_symmetric_difference(c.begin(), c.end(), cols[k].begin(), cols[k].end(), std::back_inserter(scratch));
      c.swap(scratch);
    }
    if (!c.empty()) {
      low[j] = c.back();
      owner[c.back()] = j;
    }
  }
  return low;
}

void check_resolved(const ReebGraph& rg) {
  const auto deg = node_degrees(rg);
  std::vector<double> critical;
  for (std::size_t i = 0; i < rg.node_count(); ++i)
    if (!(deg[i].up == 1 && deg[i].down == 1)) critical.push_back(rg.nodes[i].value);
  std::sort(critical.begin(), critical.end());
  if (std::adjacent_find(critical.begin(), critical.end()) != critical.end())
    throw InputError("unresolved degeneracy: critical nodes share a value");
}

}  // namespace

PersistenceDiagram compute_reeb_pd(const ReebGraph& rg) {
  check_resolved(rg);
  const std::size_t n = rg.node_count();
  PersistenceDiagram pd;

  UnionFind uf(n);
  for (const auto& [a, b] : rg.arcs) uf.unite(a, b);
  std::size_t ncomp = 0;
  const auto comp = component_labels(uf, &ncomp);
  std::vector<std::vector<std::size_t>> comp_nodes(ncomp);
  for (std::size_t i = 0; i < n; ++i) comp_nodes[comp[i]].push_back(i);
  std::vector<std::vector<Edge>> comp_arcs(ncomp);
  for (const auto& arc : rg.arcs) comp_arcs[comp[arc.first]].push_back(arc);

  enum class Cell { Vertex, Edge, Apex, ConeVertex, ConeEdge };
  struct Simplex {
    Cell cell;
    std::size_t lo;  // vertex, or lower endpoint of an edge
    std::size_t hi;  // upper endpoint of an edge
  };

  for (std::size_t c = 0; c < ncomp; ++c) {
    auto nodes = comp_nodes[c];
    std::sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) { return node_less(rg, a, b); });
    std::vector<std::size_t> rank(n, npos);
    for (std::size_t r = 0; r < nodes.size(); ++r) rank[nodes[r]] = r;

    // Edges as (lower, upper) node pairs grouped by upper and by lower end.
    std::vector<std::vector<std::size_t>> below(nodes.size()), above(nodes.size());
    for (const auto& [a, b] : comp_arcs[c]) {
      const std::size_t ra = rank[a], rb = rank[b];
      if (ra < rb) {
        below[rb].push_back(ra);
        above[ra].push_back(rb);
      } else {
        below[ra].push_back(rb);
        above[rb].push_back(ra);
      }
    }
    for (auto& v : below) std::sort(v.begin(), v.end());
    for (auto& v : above) std::sort(v.begin(), v.end(), std::greater<>());

    std::vector<Simplex> cells;
    std::vector<std::vector<std::size_t>> cols;
    std::vector<std::size_t> vertex_idx(nodes.size()), cone_idx(nodes.size());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_idx;

    for (std::size_t r = 0; r < nodes.size(); ++r) {
      vertex_idx[r] = cells.size();
      cells.push_back({Cell::Vertex, r, r});
      cols.emplace_back();
      for (std::size_t l : below[r]) {
        edge_idx[{l, r}] = cells.size();
        cells.push_back({Cell::Edge, l, r});
        cols.push_back({vertex_idx[l], vertex_idx[r]});
      }
    }
    const std::size_t apex = cells.size();
    cells.push_back({Cell::Apex, 0, 0});
    cols.emplace_back();
    for (std::size_t r = nodes.size(); r-- > 0;) {
      cone_idx[r] = cells.size();
      cells.push_back({Cell::ConeVertex, r, r});
      cols.push_back({vertex_idx[r], apex});
      for (std::size_t h : above[r]) {
        std::vector<std::size_t> col{edge_idx.at({r, h}), cone_idx[h], cone_idx[r]};
        std::sort(col.begin(), col.end());
        cells.push_back({Cell::ConeEdge, r, h});
        cols.push_back(std::move(col));
      }
    }

    const auto low = reduce_columns(cols);
    auto value = [&](std::size_t r) { return rg.nodes[nodes[r]].value; };
    auto add = [&](std::size_t br, std::size_t dr, PointKind kind, Sweep sweep) {
      PersistencePoint p;
      p.birth = value(br);
      p.death = value(dr);
      p.kind = kind;
      p.dim = dim_of(kind);
      p.sweep = sweep;
      p.birth_node = nodes[br];
      p.death_node = nodes[dr];
      pd.points.push_back(p);
    };
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (low[j] == npos) continue;
      const Simplex& birth = cells[low[j]];
      const Simplex& death = cells[j];
      if (birth.cell == Cell::Vertex && death.cell == Cell::Edge) {
        if (birth.lo != death.hi) add(birth.lo, death.hi, PointKind::Ordinary0, Sweep::Sublevel);
      } else if (birth.cell == Cell::Apex && death.cell == Cell::ConeVertex) {
        add(0, death.lo, PointKind::Extended0, Sweep::Sublevel);
      } else if (birth.cell == Cell::Edge && death.cell == Cell::ConeEdge) {
        add(birth.hi, death.lo, PointKind::Extended1, Sweep::Sublevel);
      } else if (birth.cell == Cell::ConeVertex && death.cell == Cell::ConeEdge) {
        if (birth.lo != death.lo) add(death.lo, birth.lo, PointKind::Ordinary0, Sweep::Superlevel);
      } else {
        throw std::logic_error("unexpected persistence pair in extended filtration");
      }
    }
  }
  return pd;
}

PersistenceDiagram sweep_pd(const ReebGraph& rg) {
  const std::size_t n = rg.node_count();
  const auto adj = rg.adjacency();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return node_less(rg, a, b); });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

  PersistenceDiagram pd;
  auto point = [&](std::size_t b, std::size_t d, PointKind kind, Sweep sweep) {
    PersistencePoint p;
    p.birth = rg.nodes[b].value;
    p.death = rg.nodes[d].value;
    p.kind = kind;
    p.dim = 0;
    p.sweep = sweep;
    p.birth_node = b;
    p.death_node = d;
    pd.points.push_back(p);
  };

  // Sublevel sweep: each root remembers its oldest (lowest) node.
  {
    UnionFind uf(n);
    std::vector<std::size_t> oldest(n);
    std::iota(oldest.begin(), oldest.end(), std::size_t{0});
    for (std::size_t v : order) {
      std::vector<std::size_t> roots;
      for (std::size_t w : adj[v])
        if (rank[w] < rank[v]) roots.push_back(uf.find(w));
      std::sort(roots.begin(), roots.end());
      roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
      std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) { return rank[oldest[a]] < rank[oldest[b]]; });
      for (std::size_t k = 1; k < roots.size(); ++k) point(oldest[roots[k]], v, PointKind::Ordinary0, Sweep::Sublevel);
      std::size_t keep = roots.empty() ? v : oldest[roots[0]];
      for (std::size_t r : roots) uf.unite(r, v);
      oldest[uf.find(v)] = keep;
    }
  }
  // Superlevel sweep: each root remembers its highest node.
  {
    UnionFind uf(n);
    std::vector<std::size_t> oldest(n);
    std::iota(oldest.begin(), oldest.end(), std::size_t{0});
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t v = order[k];
      std::vector<std::size_t> roots;
      for (std::size_t w : adj[v])
        if (rank[w] > rank[v]) roots.push_back(uf.find(w));
      std::sort(roots.begin(), roots.end());
      roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
      std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) { return rank[oldest[a]] > rank[oldest[b]]; });
      for (std::size_t j = 1; j < roots.size(); ++j) point(v, oldest[roots[j]], PointKind::Ordinary0, Sweep::Superlevel);
      std::size_t keep = roots.empty() ? v : oldest[roots[0]];
      for (std::size_t r : roots) uf.unite(r, v);
      oldest[uf.find(v)] = keep;
    }
  }
  // One (min, max) pair per component.
  UnionFind uf(n);
  for (const auto& [a, b] : rg.arcs) uf.unite(a, b);
  std::vector<std::size_t> lo(n, npos), hi(n, npos);
  for (std::size_t v : order) {
    const std::size_t r = uf.find(v);
    if (lo[r] == npos) lo[r] = v;
    hi[r] = v;
  }
  std::vector<std::size_t> roots;
  for (std::size_t v = 0; v < n; ++v)
    if (uf.find(v) == v) roots.push_back(v);
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) { return rank[lo[a]] < rank[lo[b]]; });
  for (std::size_t r : roots) point(lo[r], hi[r], PointKind::Extended0, Sweep::Sublevel);
  return pd;
}

}  // namespace mdtopo
