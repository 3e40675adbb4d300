#include "mdtopo/serialize.hpp"

#include <cmath>
#include <string>

#include "mdtopo/error.hpp"

namespace mdtopo {

Json to_json(const QuantizationSpec& spec) {
  Json fields = Json::array();
  for (const auto& f : spec.fields)
    fields.push_back({{"range_min", f.range_min}, {"range_max", f.range_max}, {"levels", f.levels}});
  return {{"fields", fields}};
}

QuantizationSpec spec_from_json(const Json& j) {
  QuantizationSpec spec;
  try {
    for (const auto& f : j.at("fields"))
      spec.fields.push_back({f.at("range_min").get<double>(), f.at("range_max").get<double>(), f.at("levels").get<int>()});
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed quantization spec: ") + e.what());
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw InputError(std::string("invalid quantization spec: ") + e.what());
  }
  return spec;
}

Json to_json(const JointContourNet& jcn, bool with_members) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < jcn.nodes.size(); ++i) {
    Json node = {{"id", i}, {"levels", jcn.nodes[i].levels}, {"size", jcn.nodes[i].members.size()}};
    if (with_members) node["members"] = jcn.nodes[i].members;
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const auto& [a, b] : jcn.edges) edges.push_back({a, b});
  return {{"spec", to_json(jcn.spec)}, {"nodes", nodes}, {"edges", edges}, {"clamped_values", jcn.clamped_values}};
}

Json to_json(const Mdrg& mdrg) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < mdrg.graph.nodes.size(); ++i) {
    const auto& n = mdrg.graph.nodes[i];
    nodes.push_back({{"id", i}, {"level", n.level}, {"value", n.value}, {"members", n.members}});
  }
  Json arcs = Json::array();
  for (const auto& [a, b] : mdrg.graph.arcs) arcs.push_back({a, b});
  Json out = {{"field", mdrg.graph.field_index}, {"nodes", nodes}, {"arcs", arcs}};
  if (!mdrg.children.empty()) {
    Json children = Json::object();
    for (std::size_t i = 0; i < mdrg.children.size(); ++i) children[std::to_string(i)] = to_json(mdrg.children[i]);
    out["children"] = std::move(children);
  }
  return out;
}

Json to_json(const PersistenceDiagram& pd) {
  Json out = Json::array();
  for (const auto& p : pd.points)
    out.push_back({{"birth", p.birth},
                   {"death", p.death},
                   {"dim", p.dim},
                   {"kind", to_string(p.kind)},
                   {"sweep", to_string(p.sweep)}});
  return out;
}

Json to_json(const Mdpd& mdpd) {
  Json points = Json::array();
  for (const auto& p : mdpd.points) {
    Json factors = Json::array();
    Json kinds = Json::array();
    for (const auto& f : p.factors) {
      factors.push_back({f.birth, f.death});
      kinds.push_back(to_string(f.kind));
    }
    points.push_back({{"factors", factors},
                      {"dims", p.dims()},
                      {"kinds", kinds},
                      {"node_path", p.node_path},
                      {"level_path", p.level_path}});
  }
  return {{"spec", to_json(mdpd.spec)}, {"order", mdpd.order}, {"points", points}};
}

Mdpd mdpd_from_json(const Json& j) {
  Mdpd mdpd;
  try {
    if (!j.is_object()) throw InputError("MDPD document must be an object");
    mdpd.spec = spec_from_json(j.at("spec"));
    const std::size_t n = mdpd.spec.field_count();
    if (j.contains("order")) {
      mdpd.order = j.at("order").get<std::vector<std::size_t>>();
    } else {
      for (std::size_t i = 0; i < n; ++i) mdpd.order.push_back(i);
    }
    for (const auto& jp : j.at("points")) {
      MdpdPoint p;
      const auto factors = jp.at("factors");
      const auto dims = jp.at("dims").get<std::vector<int>>();
      if (factors.size() != n || dims.size() != n) throw InputError("MDPD point does not have one factor per field");
      std::vector<std::string> kinds;
      if (jp.contains("kinds")) kinds = jp.at("kinds").get<std::vector<std::string>>();
      if (!kinds.empty() && kinds.size() != n) throw InputError("MDPD point has the wrong number of kinds");
      for (std::size_t i = 0; i < n; ++i) {
        PersistencePoint f;
        const auto bd = factors[i].get<std::vector<double>>();
        if (bd.size() != 2) throw InputError("MDPD factor must be [birth, death]");
        f.birth = bd[0];
        f.death = bd[1];
        if (!std::isfinite(f.birth) || !std::isfinite(f.death)) throw InputError("MDPD factor is not finite");
        if (dims[i] != 0 && dims[i] != 1) throw InputError("MDPD dimension must be 0 or 1");
        f.dim = dims[i];
        f.kind = kinds.empty() ? (f.dim == 1 ? PointKind::Extended1 : PointKind::Ordinary0) : parse_point_kind(kinds[i]);
        if (dim_of(f.kind) != f.dim) throw InputError("MDPD kind and dimension disagree");
        p.factors.push_back(f);
      }
      p.node_path = jp.at("node_path").get<std::vector<std::size_t>>();
      p.level_path = jp.at("level_path").get<std::vector<int>>();
      if (p.node_path.size() + 1 != n || p.level_path.size() + 1 != n)
        throw InputError("MDPD point path length does not match the field count");
      mdpd.points.push_back(std::move(p));
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed MDPD document: ") + e.what());
  }
  return mdpd;
}

Json to_json(const DistanceResult& r, bool with_transcript) {
  Json out = {{"distance", r.value}, {"q", r.q}, {"total_cost", r.total_cost}};
  if (with_transcript) {
    Json levels = Json::array();
    for (const auto& level : r.transcript) {
      Json pairs = Json::array();
      for (const auto& m : level.pairs) {
        pairs.push_back({{"f", m.f_node ? Json(*m.f_node) : Json(nullptr)},
                         {"g", m.g_node ? Json(*m.g_node) : Json(nullptr)},
                         {"cost", m.cost}});
      }
      levels.push_back({{"level", level.level}, {"pairs", pairs}});
    }
    out["transcript"] = std::move(levels);
  }
  return out;
}

Json to_json(const RetrievalScores& s) {
  return {{"nn", s.nn},
          {"first_tier", s.ft},
          {"second_tier", s.st},
          {"e_measure", s.e_measure},
          {"dcg", s.dcg},
          {"queries", s.queries},
          {"warnings", s.warnings}};
}

}  // namespace mdtopo
