#include "mdtopo/mdpd.hpp"

#include <algorithm>
#include <map>

#include "mdtopo/error.hpp"

namespace mdtopo {

Interval persistence_interval(const PersistencePoint& x) {
  return {std::min(x.birth, x.death), std::max(x.birth, x.death)};
}

std::vector<int> MdpdPoint::dims() const {
  std::vector<int> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.dim);
  return out;
}

double persistence_measure(const MdpdPoint& pt) {
  double m = 1.0;
  for (const auto& f : pt.factors) m *= persistence_interval(f).length();
  return m;
}

namespace {

void emit(const Mdrg& level, const MdrgDiagrams& diagrams, MdpdPoint& prefix, std::vector<MdpdPoint>& out) {
  if (level.children.size() != diagrams.children.size())
    throw InputError("missing diagram for a node at depth " + std::to_string(level.depth));
  for (const auto& x : diagrams.diagram.points) {
    prefix.factors.push_back(x);
    if (level.children.empty()) {
      out.push_back(prefix);
    } else {
      const Interval pi = persistence_interval(x);
      for (std::size_t p = 0; p < level.graph.node_count(); ++p) {
        const auto& node = level.graph.nodes[p];
        if (!pi.contains(node.value)) continue;
        prefix.node_path.push_back(p);
        prefix.level_path.push_back(node.level);
        emit(level.children[p], diagrams.children[p], prefix, out);
        prefix.node_path.pop_back();
        prefix.level_path.pop_back();
      }
    }
    prefix.factors.pop_back();
  }
}

}  // namespace

Mdpd construct_mdpd(const Mdrg& mdrg, const MdrgDiagrams& diagrams, const QuantizationSpec& spec) {
  if (spec.field_count() < 2) throw ConfigError("an MDPD needs at least two fields");
  if (mdrg.field_count() != spec.field_count()) throw InputError("MDRG depth does not match the quantization spec");
  Mdpd mdpd;
  mdpd.spec = spec;
  for (std::size_t i = 0; i < spec.field_count(); ++i) mdpd.order.push_back(i);
  MdpdPoint prefix;
  emit(mdrg, diagrams, prefix, mdpd.points);
  return mdpd;
}

std::vector<std::pair<std::size_t, std::vector<std::size_t>>> points_by_node(const Mdpd& mdpd) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < mdpd.points.size(); ++i) groups[mdpd.points[i].node_path.at(0)].push_back(i);
  return {groups.begin(), groups.end()};
}

}  // namespace mdtopo
