#pragma once

#include "json.hpp"

#include "mdtopo/distance.hpp"
#include "mdtopo/jcn.hpp"
#include "mdtopo/mdpd.hpp"
#include "mdtopo/mdrg.hpp"
#include "mdtopo/persistence.hpp"
#include "mdtopo/retrieval.hpp"

namespace mdtopo {

using Json = nlohmann::json;

Json to_json(const QuantizationSpec& spec);
QuantizationSpec spec_from_json(const Json& j);

// {spec, nodes:[{id, levels, size[, members]}], edges:[[i,j],...]}
Json to_json(const JointContourNet& jcn, bool with_members = false);

// {field, nodes:[{id, level, value, members}], arcs, children:{"id": ...}}
Json to_json(const Mdrg& mdrg);

// [{birth, death, dim, kind, sweep}, ...]
Json to_json(const PersistenceDiagram& pd);

// {spec, order, points:[{factors:[[b,d],...], dims, kinds, node_path, level_path}]}
Json to_json(const Mdpd& mdpd);
// Throws InputError on malformed documents. `kinds` is optional.
Mdpd mdpd_from_json(const Json& j);

Json to_json(const DistanceResult& r, bool with_transcript);
Json to_json(const RetrievalScores& s);

}  // namespace mdtopo
