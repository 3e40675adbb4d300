#pragma once

#include <cstddef>
#include <vector>

#include "mdtopo/jcn.hpp"
#include "mdtopo/mdrg.hpp"
#include "mdtopo/persistence.hpp"

namespace mdtopo {

// Persistence diagrams laid out like an Mdrg: children[i] belongs to the
// restricted graph of node i.
struct MdrgDiagrams {
  PersistenceDiagram diagram;
  std::vector<MdrgDiagrams> children;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval persistence_interval(const PersistencePoint& x);

struct MdpdPoint {
  std::vector<PersistencePoint> factors;  // one per field
  std::vector<std::size_t> node_path;     // factors.size() - 1 entries
  std::vector<int> level_path;

  std::vector<int> dims() const;
};

struct Mdpd {
  QuantizationSpec spec;
  std::vector<std::size_t> order;  // field permutation applied before quantization
  std::vector<MdpdPoint> points;

  std::size_t field_count() const { return spec.field_count(); }
};

// Product of the factor interval lengths.
double persistence_measure(const MdpdPoint& pt);

// For every first-field point x and every node p whose f-bar lies in the
// closed interval pI(x), combines x with each point of p's child diagram,
// recursively for more than two fields. Requires at least two fields.
Mdpd construct_mdpd(const Mdrg& mdrg, const MdrgDiagrams& diagrams, const QuantizationSpec& spec);

// Indices of points grouped by node_path[0], ascending node id.
std::vector<std::pair<std::size_t, std::vector<std::size_t>>> points_by_node(const Mdpd& mdpd);

}  // namespace mdtopo
