#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mdtopo/mdrg.hpp"

namespace mdtopo {

enum class PointKind { Ordinary0, Extended0, Extended1 };

// Which filtration produced an Ordinary0 point: sublevel pairs are
// (minimum, down-fork); superlevel pairs are recorded as (up-fork, maximum).
enum class Sweep { Sublevel, Superlevel };

struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  PointKind kind = PointKind::Ordinary0;
  Sweep sweep = Sweep::Sublevel;
  std::size_t birth_node = 0;
  std::size_t death_node = 0;
};

struct PersistenceDiagram {
  std::vector<PersistencePoint> points;
  std::size_t source = 0;
};

std::string_view to_string(PointKind kind);
std::string_view to_string(Sweep sweep);
PointKind parse_point_kind(std::string_view s);

int dim_of(PointKind kind);

// Node order used throughout: by value, then by node index.
bool node_less(const ReebGraph& rg, std::size_t a, std::size_t b);

// Counts of neighbours above / below a node in node_less order.
struct NodeDegree {
  std::size_t up = 0;
  std::size_t down = 0;
};
std::vector<NodeDegree> node_degrees(const ReebGraph& rg);

// (up, down) is one of (0,1), (1,0), (1,1), (2,1), (1,2), or (0,0) for an
// isolated node.
bool is_simple_degree(NodeDegree d);

// Number of nodes whose degree is not (1,1).
std::size_t critical_node_count(const ReebGraph& rg);

// Splits every node with a non-simple degree into a chain of simple nodes,
// then spreads nodes sharing a value by multiples of epsilon (ordered by
// original node index, then chain position). Split nodes keep the level
// and members of their origin; the first chain node keeps the original
// index and new nodes are appended. Throws ConfigError if epsilon <= 0 or
// the offsets could reorder distinct values.
ReebGraph resolve_degeneracies(const ReebGraph& rg, double epsilon);

// 1e-6 of the smallest gap between distinct node values (1e-6 if all
// values are equal).
double default_epsilon(const ReebGraph& rg);

// Ordinary, extended-0 and extended-1 points of the Reeb graph by
// boundary-matrix reduction of the coned extended filtration, one cone
// per connected component. The unpaired global minimum of each component
// is left out. Throws InputError if two critical nodes share a value.
PersistenceDiagram compute_reeb_pd(const ReebGraph& rg);

// Union-find sweeps: sublevel elder rule, superlevel elder rule and the
// (min, max) pair of every component. Yields the same Ordinary0 and
// Extended0 points as compute_reeb_pd.
PersistenceDiagram sweep_pd(const ReebGraph& rg);

}  // namespace mdtopo
