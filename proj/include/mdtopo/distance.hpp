#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mdtopo/mdpd.hpp"
#include "mdtopo/persistence.hpp"

namespace mdtopo {

// Wasserstein distance between the dimension-k parts of two Reeb graph
// diagrams with L-infinity ground distance and diagonal augmentation.
double reeb_wasserstein(const PersistenceDiagram& f, const PersistenceDiagram& g, int k, double q);

// Max over all 2n coordinates.
double point_distance(const MdpdPoint& x, const MdpdPoint& y);

// Distance to the nearest point that is diagonal in every factor: half the
// largest factor interval length.
double diagonal_distance(const MdpdPoint& x);

// Sum of diagonal_distance^q.
double diagonal_cost(std::span<const MdpdPoint> points, double q);

// Cost (not yet rooted) of matching PD^p against PD^p'. All points on both
// sides must share level_path[0]; otherwise throws InputError. Points are
// matched only within equal dims tuples; for more than two fields the node
// level and node grouping rules are applied again on the deeper path entries.
double inner_distance(std::span<const MdpdPoint> f, std::span<const MdpdPoint> g, double q);

struct NodeMatch {
  std::optional<std::size_t> f_node;  // empty: g_node paid its diagonal cost
  std::optional<std::size_t> g_node;
  double cost = 0.0;
};

struct LevelMatch {
  int level = 0;
  std::vector<NodeMatch> pairs;
};

struct DistanceResult {
  double value = 0.0;
  double q = 2.0;
  double total_cost = 0.0;              // value^q
  std::vector<LevelMatch> transcript;  // first-field node matching per level
};

// Points are matched only between nodes of equal first-field level, all
// points of one node go to a single node of the other side, and only equal
// dimension tuples are paired. Throws ConfigError for q <= 0 and
// InputError when the quantization specs differ.
DistanceResult mdrg_distance(const Mdpd& f, const Mdpd& g, double q);

}  // namespace mdtopo
