#include "mdtopo/pipeline.hpp"

#include "mdtopo/error.hpp"
#include "mdtopo/parallel.hpp"

namespace mdtopo {

PersistenceDiagram quantized_diagram(const ReebGraph& rg, const FieldQuantization& fq, std::optional<double> epsilon) {
  const ReebGraph resolved = resolve_degeneracies(rg, epsilon.value_or(1e-6 * fq.width()));
  PersistenceDiagram pd = compute_reeb_pd(resolved);
  for (auto& p : pd.points) {
    p.birth_node = resolved.nodes[p.birth_node].origin;
    p.death_node = resolved.nodes[p.death_node].origin;
    p.birth = fq.level_value(rg.nodes[p.birth_node].level);
    p.death = fq.level_value(rg.nodes[p.death_node].level);
  }
  return pd;
}

MdrgDiagrams compute_diagrams(const Mdrg& mdrg, const QuantizationSpec& spec, std::optional<double> epsilon,
                              unsigned jobs) {
  MdrgDiagrams out;
  out.diagram = quantized_diagram(mdrg.graph, spec.fields.at(mdrg.graph.field_index), epsilon);
  out.children.resize(mdrg.children.size());
  parallel_for(mdrg.children.size(), jobs, [&](std::size_t i) {
    out.children[i] = compute_diagrams(mdrg.children[i], spec, epsilon, 1);
  });
  return out;
}

namespace {

MultiField ordered(const MultiField& mf, const PipelineConfig& config) {
  if (config.order.empty()) return mf;
  return mf.reordered(config.order);
}

}  // namespace

PipelineResult run_pipeline(const MultiField& input, const PipelineConfig& config) {
  if (config.epsilon && !(*config.epsilon > 0)) throw ConfigError("epsilon must be positive");
  const MultiField mf = ordered(input, config);
  PipelineResult r;
  r.jcn = build_jcn(mf, config.spec);
  r.mdrg = build_mdrg(r.jcn, config.jobs);
  r.diagrams = compute_diagrams(r.mdrg, config.spec, config.epsilon, config.jobs);
  if (mf.field_count() >= 2) {
    r.mdpd = construct_mdpd(r.mdrg, r.diagrams, config.spec);
    if (!config.order.empty()) r.mdpd->order = config.order;
  }
  return r;
}

Mdpd compute_mdpd(const MultiField& mf, const PipelineConfig& config) {
  if (mf.field_count() < 2) throw ConfigError("an MDPD needs at least two fields");
  return *run_pipeline(mf, config).mdpd;
}

MultiField shape_fields(const SimplicialMesh& mesh, unsigned jobs) {
  MultiField mf{mesh, {}};
  mf.fields.push_back(geodesic_field(mesh, jobs));
  mf.fields.push_back(euclidean_field(mesh, jobs));
  return mf;
}

MultiField load_multifield(const std::filesystem::path& path, std::span<const std::filesystem::path> field_csvs,
                           unsigned jobs) {
  const auto ext = path.extension().string();
  if (ext == ".grid") {
    if (!field_csvs.empty()) throw ConfigError("grid files carry their own fields; --fields is not accepted");
    GridData g = load_grid(path);
    return MultiField{g.grid, std::move(g.fields)};
  }
  if (ext == ".off") {
    SimplicialMesh mesh = load_mesh(path);
    if (field_csvs.empty()) return shape_fields(mesh, jobs);
    MultiField mf{mesh, {}};
    for (const auto& csv : field_csvs) mf.fields.push_back(load_field_csv(csv, mesh.vertex_count()));
    mf.validate();
    return mf;
  }
  throw InputError(path.string() + ": unsupported input format (expected .off or .grid)");
}

}  // namespace mdtopo
