#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdtopo/jcn.hpp"

namespace mdtopo {

struct ReebNode {
  int level = 0;
  double value = 0.0;                // f-bar; shifted by small offsets after degeneracy resolution
  std::vector<std::size_t> members;  // JCN node ids, ascending
  std::size_t origin = 0;            // index of the node this one was split from
};

struct ReebGraph {
  std::size_t field_index = 0;
  std::vector<ReebNode> nodes;
  std::vector<Edge> arcs;  // sorted, first < second, no duplicates

  std::size_t node_count() const { return nodes.size(); }
  std::vector<std::vector<std::size_t>> adjacency() const;
  std::size_t component_count() const;
  // |arcs| - |nodes| + #components
  std::size_t cycle_rank() const;
};

// Connected components of equal-level JCN nodes within `subset` (JCN node
// ids, any order) for field `field_index`. Nodes are ordered by smallest
// member; arcs come from JCN edges joining different components.
ReebGraph extract_reeb(const JointContourNet& jcn, std::span<const std::size_t> subset, std::size_t field_index);

// One Reeb graph per hierarchy level: `graph` quantizes field `depth`, and
// children[i] is the restricted graph inside graph.nodes[i] for the next
// field. Leaves (last field) have no children.
struct Mdrg {
  std::size_t depth = 0;
  ReebGraph graph;
  std::vector<Mdrg> children;

  std::size_t field_count() const;
};

Mdrg build_mdrg(const JointContourNet& jcn, unsigned jobs = 1);

}  // namespace mdtopo
