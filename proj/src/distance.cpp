#include "mdtopo/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mdtopo/assignment.hpp"
#include "mdtopo/error.hpp"

namespace mdtopo {

namespace {

using PointRefs = std::vector<const MdpdPoint*>;

void check_q(double q) {
  if (!(q > 0) || !std::isfinite(q)) throw ConfigError("q must be a positive finite number");
}

double power(double x, double q) { return q == 1.0 ? x : std::pow(x, q); }

double diagonal_cost(const PointRefs& pts, double q) {
  double sum = 0.0;
  for (const auto* p : pts) sum += power(diagonal_distance(*p), q);
  return sum;
}

// Optimal partial matching between two sets, where leaving an item
// unmatched costs its diagonal price.
template <typename Cost>
double augmented_assignment(std::span<const double> diag_f, std::span<const double> diag_g, Cost&& cost,
                            std::vector<std::optional<std::size_t>>* match_of_f = nullptr,
                            std::vector<char>* g_matched = nullptr) {
  const std::size_t nf = diag_f.size(), ng = diag_g.size();
  const std::size_t k = nf + ng;
  if (k == 0) return 0.0;
  CostMatrix m(k, 0.0);
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < ng; ++j) m(i, j) = cost(i, j);
    for (std::size_t j = ng; j < k; ++j) m(i, j) = diag_f[i];
  }
  for (std::size_t i = nf; i < k; ++i)
    for (std::size_t j = 0; j < ng; ++j) m(i, j) = diag_g[j];
  const Assignment a = hungarian(m);
  if (match_of_f) {
    match_of_f->assign(nf, std::nullopt);
    for (std::size_t i = 0; i < nf; ++i)
      if (a.column_of[i] < ng) (*match_of_f)[i] = a.column_of[i];
  }
  if (g_matched) {
    g_matched->assign(ng, 0);
    for (std::size_t i = 0; i < nf; ++i)
      if (a.column_of[i] < ng) (*g_matched)[a.column_of[i]] = 1;
  }
  return a.total;
}

// Points with identical factors have identical costs, so each dims class
// is solved as a transportation problem over distinct points.
struct Distinct {
  std::vector<const MdpdPoint*> reps;
  std::vector<std::size_t> counts;
  std::vector<double> diagonal;  // power(diagonal_distance, q) per rep
  std::size_t total = 0;
};

using LeafClasses = std::map<std::vector<int>, Distinct>;

LeafClasses collapse(const PointRefs& pts, double q) {
  std::map<std::vector<int>, std::map<std::vector<double>, std::size_t>> index;
  LeafClasses out;
  std::vector<double> key;
  for (const auto* p : pts) {
    key.clear();
    for (const auto& f : p->factors) {
      key.push_back(f.birth);
      key.push_back(f.death);
    }
    auto dims = p->dims();
    auto& d = out[dims];
    auto [it, fresh] = index[std::move(dims)].emplace(key, d.reps.size());
    if (fresh) {
      d.reps.push_back(p);
      d.counts.push_back(0);
      d.diagonal.push_back(power(diagonal_distance(*p), q));
    }
    ++d.counts[it->second];
    ++d.total;
  }
  return out;
}

double transport_distance(const Distinct& f, const Distinct& g, double q) {
  const std::size_t rows = f.reps.size() + 1, cols = g.reps.size() + 1;
  std::vector<std::size_t> supply = f.counts, demand = g.counts;
  supply.push_back(g.total);  // diagonal row absorbs g's unmatched points
  demand.push_back(f.total);
  std::vector<double> cost(rows * cols, 0.0);
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (std::size_t j = 0; j + 1 < cols; ++j) cost[i * cols + j] = power(point_distance(*f.reps[i], *g.reps[j]), q);
    cost[i * cols + cols - 1] = f.diagonal[i];
  }
  for (std::size_t j = 0; j + 1 < cols; ++j) cost[(rows - 1) * cols + j] = g.diagonal[j];
  return min_cost_transport(supply, demand, cost);
}

// Matching within equal dims tuples.
double leaf_distance(const LeafClasses& f, const LeafClasses& g, double q) {
  static const Distinct empty;
  double total = 0.0;
  auto fi = f.begin();
  auto gi = g.begin();
  while (fi != f.end() || gi != g.end()) {
    if (gi == g.end() || (fi != f.end() && fi->first < gi->first)) {
      total += transport_distance(fi->second, empty, q);
      ++fi;
    } else if (fi == f.end() || gi->first < fi->first) {
      total += transport_distance(empty, gi->second, q);
      ++gi;
    } else {
      total += transport_distance(fi->second, gi->second, q);
      ++fi;
      ++gi;
    }
  }
  return total;
}

double class_distance(const PointRefs& f, const PointRefs& g, double q) {
  return leaf_distance(collapse(f, q), collapse(g, q), q);
}

struct NodeGroup {
  std::size_t node = 0;
  int level = 0;
  PointRefs points;
};

std::vector<NodeGroup> group_by_node(const PointRefs& pts, std::size_t depth) {
  std::map<std::size_t, NodeGroup> groups;
  for (const auto* p : pts) {
    if (depth >= p->node_path.size() || depth >= p->level_path.size())
      throw InputError("MDPD point has a node path shorter than its field count requires");
    auto& g = groups[p->node_path[depth]];
    if (g.points.empty()) {
      g.node = p->node_path[depth];
      g.level = p->level_path[depth];
    } else if (g.level != p->level_path[depth]) {
      throw InputError("MDPD node " + std::to_string(g.node) + " carries two different levels");
    }
    g.points.push_back(p);
  }
  std::vector<NodeGroup> out;
  for (auto& [id, g] : groups) out.push_back(std::move(g));
  return out;
}

double subtree_distance(const PointRefs& f, const PointRefs& g, double q, std::size_t depth,
                        std::vector<LevelMatch>* transcript);

// Node-level matching at one quantized level.
double level_distance(const std::vector<const NodeGroup*>& fn, const std::vector<const NodeGroup*>& gn, double q,
                      std::size_t depth, LevelMatch* record) {
  std::vector<double> df, dg;
  for (const auto* n : fn) df.push_back(diagonal_cost(n->points, q));
  for (const auto* n : gn) dg.push_back(diagonal_cost(n->points, q));
  std::vector<double> pair_cost(fn.size() * gn.size());
  const bool leaf = !fn.empty() && depth + 1 >= fn.front()->points.front()->node_path.size();
  if (leaf && !gn.empty()) {
    // Collapse each node once rather than once per pair.
    std::vector<LeafClasses> lf, lg;
    for (const auto* n : fn) lf.push_back(collapse(n->points, q));
    for (const auto* n : gn) lg.push_back(collapse(n->points, q));
    for (std::size_t i = 0; i < fn.size(); ++i)
      for (std::size_t j = 0; j < gn.size(); ++j) pair_cost[i * gn.size() + j] = leaf_distance(lf[i], lg[j], q);
  } else {
    for (std::size_t i = 0; i < fn.size(); ++i)
      for (std::size_t j = 0; j < gn.size(); ++j)
        pair_cost[i * gn.size() + j] = subtree_distance(fn[i]->points, gn[j]->points, q, depth + 1, nullptr);
  }
  std::vector<std::optional<std::size_t>> match;
  std::vector<char> g_matched;
  const double total = augmented_assignment(
      df, dg, [&](std::size_t i, std::size_t j) { return pair_cost[i * gn.size() + j]; }, &match, &g_matched);
  if (record) {
    for (std::size_t i = 0; i < fn.size(); ++i) {
      if (match[i])
        record->pairs.push_back({fn[i]->node, gn[*match[i]]->node, pair_cost[i * gn.size() + *match[i]]});
      else
        record->pairs.push_back({fn[i]->node, std::nullopt, df[i]});
    }
    for (std::size_t j = 0; j < gn.size(); ++j)
      if (!g_matched[j]) record->pairs.push_back({std::nullopt, gn[j]->node, dg[j]});
  }
  return total;
}

std::size_t path_length(const PointRefs& f, const PointRefs& g) {
  if (!f.empty()) return f.front()->node_path.size();
  if (!g.empty()) return g.front()->node_path.size();
  return 0;
}

double subtree_distance(const PointRefs& f, const PointRefs& g, double q, std::size_t depth,
                        std::vector<LevelMatch>* transcript) {
  if (depth >= path_length(f, g)) return class_distance(f, g, q);
  const auto gf = group_by_node(f, depth);
  const auto gg = group_by_node(g, depth);
  std::map<int, std::pair<std::vector<const NodeGroup*>, std::vector<const NodeGroup*>>> levels;
  for (const auto& n : gf) levels[n.level].first.push_back(&n);
  for (const auto& n : gg) levels[n.level].second.push_back(&n);
  double total = 0.0;
  for (const auto& [level, sides] : levels) {
    LevelMatch record;
    record.level = level;
    total += level_distance(sides.first, sides.second, q, depth, transcript ? &record : nullptr);
    if (transcript) transcript->push_back(std::move(record));
  }
  return total;
}

PointRefs refs(std::span<const MdpdPoint> pts) {
  PointRefs out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(&p);
  return out;
}

void check_shape(const PointRefs& pts, std::size_t fields) {
  for (const auto* p : pts) {
    if (p->factors.size() != fields || p->node_path.size() + 1 != fields || p->level_path.size() + 1 != fields)
      throw InputError("MDPD point shape does not match the field count");
  }
}

int compare_points(const MdpdPoint& a, const MdpdPoint& b) {
  auto key = [](const MdpdPoint& p) {
    std::vector<double> k;
    for (const auto& f : p.factors) {
      k.push_back(f.birth);
      k.push_back(f.death);
      k.push_back(f.dim);
    }
    for (auto n : p.node_path) k.push_back(static_cast<double>(n));
    for (auto l : p.level_path) k.push_back(l);
    return k;
  };
  const auto ka = key(a), kb = key(b);
  if (ka < kb) return -1;
  if (kb < ka) return 1;
  return 0;
}

// Total order on MDPDs so that d(f, g) and d(g, f) run the same computation.
bool canonical_before(const Mdpd& a, const Mdpd& b) {
  if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const int c = compare_points(a.points[i], b.points[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace

double point_distance(const MdpdPoint& x, const MdpdPoint& y) {
  if (x.factors.size() != y.factors.size()) throw InputError("MDPD points have different field counts");
  double d = 0.0;
  for (std::size_t i = 0; i < x.factors.size(); ++i) {
    d = std::max(d, std::abs(x.factors[i].birth - y.factors[i].birth));
    d = std::max(d, std::abs(x.factors[i].death - y.factors[i].death));
  }
  return d;
}

double diagonal_distance(const MdpdPoint& x) {
  double m = 0.0;
  for (const auto& f : x.factors) m = std::max(m, persistence_interval(f).length());
  return 0.5 * m;
}

double diagonal_cost(std::span<const MdpdPoint> points, double q) {
  check_q(q);
  return diagonal_cost(refs(points), q);
}

double inner_distance(std::span<const MdpdPoint> f, std::span<const MdpdPoint> g, double q) {
  check_q(q);
  const auto rf = refs(f), rg = refs(g);
  std::optional<int> level;
  for (const auto* side : {&rf, &rg})
    for (const auto* p : *side) {
      if (p->level_path.empty()) throw InputError("MDPD point has no level path");
      if (level && *level != p->level_path[0])
        throw InputError("inner_distance across different first-field levels");
      level = p->level_path[0];
    }
  return subtree_distance(rf, rg, q, 1, nullptr);
}

double reeb_wasserstein(const PersistenceDiagram& f, const PersistenceDiagram& g, int k, double q) {
  check_q(q);
  std::vector<const PersistencePoint*> pf, pg;
  for (const auto& p : f.points)
    if (p.dim == k) pf.push_back(&p);
  for (const auto& p : g.points)
    if (p.dim == k) pg.push_back(&p);
  std::vector<double> df, dg;
  for (const auto* p : pf) df.push_back(power(0.5 * persistence_interval(*p).length(), q));
  for (const auto* p : pg) dg.push_back(power(0.5 * persistence_interval(*p).length(), q));
  const double total = augmented_assignment(df, dg, [&](std::size_t i, std::size_t j) {
    return power(std::max(std::abs(pf[i]->birth - pg[j]->birth), std::abs(pf[i]->death - pg[j]->death)), q);
  });
  return std::pow(total, 1.0 / q);
}

DistanceResult mdrg_distance(const Mdpd& f, const Mdpd& g, double q) {
  check_q(q);
  if (!(f.spec == g.spec)) throw InputError("MDPDs were built with different quantization specs");
  if (canonical_before(g, f)) {
    DistanceResult r = mdrg_distance(g, f, q);
    for (auto& level : r.transcript)
      for (auto& pair : level.pairs) std::swap(pair.f_node, pair.g_node);
    return r;
  }
  const auto rf = refs(f.points), rg = refs(g.points);
  check_shape(rf, f.field_count());
  check_shape(rg, g.field_count());
  DistanceResult r;
  r.q = q;
  r.total_cost = subtree_distance(rf, rg, q, 0, &r.transcript);
  r.value = std::pow(r.total_cost, 1.0 / q);
  return r;
}

}  // namespace mdtopo
