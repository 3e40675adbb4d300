#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "mdtopo/jcn.hpp"
#include "mdtopo/mdpd.hpp"
#include "mdtopo/mdrg.hpp"
#include "mdtopo/mesh_field.hpp"
#include "mdtopo/persistence.hpp"

namespace mdtopo {

// Resolves degeneracies (epsilon defaults to 1e-6 of the level width),
// computes the diagram and snaps every coordinate back to the f-bar value
// of its node's level. birth_node / death_node refer to nodes of `rg`.
PersistenceDiagram quantized_diagram(const ReebGraph& rg, const FieldQuantization& fq,
                                     std::optional<double> epsilon = std::nullopt);

MdrgDiagrams compute_diagrams(const Mdrg& mdrg, const QuantizationSpec& spec,
                              std::optional<double> epsilon = std::nullopt, unsigned jobs = 1);

struct PipelineConfig {
  std::vector<std::size_t> order;  // empty: fields as given
  QuantizationSpec spec;           // in the permuted field order
  std::optional<double> epsilon;
  unsigned jobs = 1;
};

struct PipelineResult {
  JointContourNet jcn;
  Mdrg mdrg;
  MdrgDiagrams diagrams;
  std::optional<Mdpd> mdpd;  // only for two or more fields
};

PipelineResult run_pipeline(const MultiField& mf, const PipelineConfig& config);

// MDPD of a multi-field with at least two fields.
Mdpd compute_mdpd(const MultiField& mf, const PipelineConfig& config);

// Mesh carrying the geodesic and Euclidean descriptor fields, in that order.
MultiField shape_fields(const SimplicialMesh& mesh, unsigned jobs = 1);

// .grid files carry their own fields. For .off meshes the per-vertex CSVs
// in `field_csvs` are attached, or the two descriptor fields are
// synthesized when none are given.
MultiField load_multifield(const std::filesystem::path& path, std::span<const std::filesystem::path> field_csvs = {},
                           unsigned jobs = 1);

}  // namespace mdtopo
