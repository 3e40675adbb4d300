#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdtopo/mesh_field.hpp"

namespace mdtopo {

struct FieldQuantization {
  double range_min = 0.0;
  double range_max = 1.0;
  int levels = 1;

  double width() const { return (range_max - range_min) / levels; }
  // Lower bin boundary of `level`.
  double level_value(int level) const { return range_min + level * width(); }

  bool operator==(const FieldQuantization&) const = default;
};

struct QuantizationSpec {
  std::vector<FieldQuantization> fields;

  std::size_t field_count() const { return fields.size(); }
  std::size_t total_levels() const;
  // Throws ConfigError unless every field has range_max > range_min and
  // levels >= 1.
  void validate() const;

  bool operator==(const QuantizationSpec&) const = default;
};

// Same range and level count for every field.
QuantizationSpec uniform_spec(std::size_t field_count, int levels, double range_min = 0.0, double range_max = 1.0);

// Per-field [min, max] taken jointly over all given multi-fields. A field
// that is constant over the whole corpus gets the range [min, min + 1].
QuantizationSpec corpus_spec(std::span<const MultiField> corpus, std::span<const int> levels);

// floor((value - range_min) / width) clamped into [0, levels - 1]. Values
// strictly outside [range_min, range_max] increment *clamped.
int quantize(double value, const FieldQuantization& q, std::size_t* clamped = nullptr);

struct JcnNode {
  std::vector<int> levels;
  std::vector<std::size_t> members;  // carrier vertex ids, ascending
};

struct JointContourNet {
  QuantizationSpec spec;
  std::vector<JcnNode> nodes;
  std::vector<Edge> edges;       // sorted, first < second
  std::size_t clamped_values = 0;

  std::size_t node_count() const { return nodes.size(); }
  // Per-node adjacency lists built from `edges`.
  std::vector<std::vector<std::size_t>> adjacency() const;
};

// Joint contours are the connected components (over carrier edges) of
// vertices with identical level tuples. Nodes are ordered by their smallest
// member vertex.
JointContourNet build_jcn(const MultiField& mf, const QuantizationSpec& spec);

}  // namespace mdtopo
