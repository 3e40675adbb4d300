#include "mdtopo/mdrg.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mdtopo/error.hpp"
#include "mdtopo/parallel.hpp"
#include "mdtopo/union_find.hpp"

namespace mdtopo {

std::vector<std::vector<std::size_t>> ReebGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& [a, b] : arcs) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::size_t ReebGraph::component_count() const {
  UnionFind uf(nodes.size());
  for (const auto& [a, b] : arcs) uf.unite(a, b);
  std::size_t count = 0;
  component_labels(uf, &count);
  return count;
}

std::size_t ReebGraph::cycle_rank() const { return arcs.size() + component_count() - nodes.size(); }

ReebGraph extract_reeb(const JointContourNet& jcn, std::span<const std::size_t> subset, std::size_t field_index) {
  if (subset.empty()) throw InputError("cannot extract a Reeb graph from an empty JCN subgraph");
  if (field_index >= jcn.spec.field_count()) throw ConfigError("field index out of range");

  std::vector<std::size_t> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::size_t, std::size_t> local;
  local.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= jcn.node_count()) throw InputError("JCN node id out of range");
    local.emplace(ids[i], i);
  }

  std::vector<Edge> inner;
  // JCN edges with both ends in the subset, in local ids.
  for (const auto& [a, b] : jcn.edges) {
    const auto ia = local.find(a);
    if (ia == local.end()) continue;
    const auto ib = local.find(b);
    if (ib == local.end()) continue;
    inner.emplace_back(ia->second, ib->second);
  }

  auto level_of = [&](std::size_t li) { return jcn.nodes[ids[li]].levels[field_index]; };
  UnionFind uf(ids.size());
  for (const auto& [a, b] : inner)
    if (level_of(a) == level_of(b)) uf.unite(a, b);
  std::size_t count = 0;
  const auto label = component_labels(uf, &count);

  const auto& fq = jcn.spec.fields[field_index];
  ReebGraph rg;
  rg.field_index = field_index;
  rg.nodes.resize(count);
  for (std::size_t li = 0; li < ids.size(); ++li) {
    auto& node = rg.nodes[label[li]];
    if (node.members.empty()) {
      node.level = level_of(li);
      node.value = fq.level_value(node.level);
      node.origin = label[li];
    }
    node.members.push_back(ids[li]);
  }
  for (const auto& [a, b] : inner) {
    const std::size_t la = label[a], lb = label[b];
    if (la != lb) rg.arcs.emplace_back(std::min(la, lb), std::max(la, lb));
  }
  std::sort(rg.arcs.begin(), rg.arcs.end());
  rg.arcs.erase(std::unique(rg.arcs.begin(), rg.arcs.end()), rg.arcs.end());
  return rg;
}

std::size_t Mdrg::field_count() const {
  std::size_t n = 1;
  const Mdrg* m = this;
  while (!m->children.empty()) {
    m = &m->children.front();
    ++n;
  }
  return n;
}

namespace {

Mdrg build_level(const JointContourNet& jcn, std::span<const std::size_t> subset, std::size_t depth, unsigned jobs) {
  Mdrg m;
  m.depth = depth;
  m.graph = extract_reeb(jcn, subset, depth);
  if (depth + 1 < jcn.spec.field_count()) {
    m.children.resize(m.graph.node_count());
    parallel_for(m.graph.node_count(), jobs, [&](std::size_t i) {
      m.children[i] = build_level(jcn, m.graph.nodes[i].members, depth + 1, 1);
    });
  }
  return m;
}

}  // namespace

Mdrg build_mdrg(const JointContourNet& jcn, unsigned jobs) {
  if (jcn.spec.field_count() == 0) throw ConfigError("JCN has no fields");
  std::vector<std::size_t> all(jcn.node_count());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_level(jcn, all, 0, jobs);
}

}  // namespace mdtopo
