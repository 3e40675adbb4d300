#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mdtopo/distance.hpp"
#include "mdtopo/error.hpp"
#include "mdtopo/pipeline.hpp"
#include "mdtopo/serialize.hpp"
#include "support.hpp"

using namespace mdtopo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mdtopo_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void check_diagrams_snapped(const Mdrg& m, const MdrgDiagrams& d, const QuantizationSpec& spec) {
  const auto& fq = spec.fields[m.graph.field_index];
  for (const auto& p : d.diagram.points) {
    EXPECT_EQ(p.birth, fq.level_value(m.graph.nodes[p.birth_node].level));
    EXPECT_EQ(p.death, fq.level_value(m.graph.nodes[p.death_node].level));
  }
  for (std::size_t i = 0; i < m.children.size(); ++i) check_diagrams_snapped(m.children[i], d.children[i], spec);
}

}  // namespace

TEST(QuantizedDiagram, SnapsToLevelValues) {
  // Node 0 is a minimum with two arcs up; the two level-2 nodes are tied
  // maxima. Resolution moves values by epsilon, snapping moves them back.
  ReebGraph rg = oracle::make_graph({0.0, 0.5, 0.5, 0.25}, {{0, 1}, {0, 3}, {2, 3}});
  const FieldQuantization fq{0.0, 1.0, 4};
  for (std::size_t i = 0; i < rg.node_count(); ++i) rg.nodes[i].level = static_cast<int>(rg.nodes[i].value * 4);
  const auto pd = quantized_diagram(rg, fq);
  EXPECT_EQ(oracle::sorted_points(pd),
            (std::vector<oracle::PointKey>{{static_cast<int>(PointKind::Ordinary0), 0.0, 0.5},
                                           {static_cast<int>(PointKind::Extended0), 0.0, 0.5}}));
}

TEST(Pipeline, SnappedValuesAndJobIndependence) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto mf = oracle::smooth_random_grid(rng, 9, 9, 2);
    PipelineConfig cfg;
    cfg.spec = uniform_spec(2, 5);
    const auto a = run_pipeline(mf, cfg);
    check_diagrams_snapped(a.mdrg, a.diagrams, cfg.spec);
    cfg.jobs = 3;
    const auto b = run_pipeline(mf, cfg);
    EXPECT_EQ(to_json(*a.mdpd).dump(), to_json(*b.mdpd).dump());
  }
}

TEST(Pipeline, OrderChangesTheDiagram) {
  std::mt19937_64 rng(42);
  const auto mf = oracle::smooth_random_grid(rng, 8, 8, 2);
  PipelineConfig cfg;
  cfg.spec = uniform_spec(2, 4);
  const auto straight = compute_mdpd(mf, cfg);
  cfg.order = {1, 0};
  const auto swapped = compute_mdpd(mf, cfg);
  EXPECT_EQ(swapped.order, (std::vector<std::size_t>{1, 0}));
  EXPECT_NE(to_json(straight).dump(), to_json(swapped).dump());
}

TEST(Pipeline, Errors) {
  std::mt19937_64 rng(43);
  const auto one = oracle::random_grid(rng, 4, 4, 1);
  PipelineConfig cfg;
  cfg.spec = uniform_spec(1, 3);
  EXPECT_THROW(compute_mdpd(one, cfg), ConfigError);
  EXPECT_FALSE(run_pipeline(one, cfg).mdpd.has_value());
  cfg.epsilon = 0.0;
  EXPECT_THROW(run_pipeline(one, cfg), ConfigError);
  PipelineConfig bad_order;
  bad_order.spec = uniform_spec(2, 3);
  bad_order.order = {0, 0};
  EXPECT_THROW(run_pipeline(oracle::random_grid(rng, 4, 4, 2), bad_order), ConfigError);
}

TEST(Serialize, MdpdRoundTrip) {
  std::mt19937_64 rng(44);
  PipelineConfig cfg;
  cfg.spec = QuantizationSpec{{{0.0, 1.0, 4}, {-0.1, 1.1, 3}}};
  const auto a = compute_mdpd(oracle::smooth_random_grid(rng, 8, 8, 2), cfg);
  const auto b = compute_mdpd(oracle::smooth_random_grid(rng, 8, 8, 2), cfg);
  const auto a2 = mdpd_from_json(Json::parse(to_json(a).dump()));
  EXPECT_EQ(to_json(a2).dump(), to_json(a).dump());
  EXPECT_EQ(mdrg_distance(a2, b, 2).value, mdrg_distance(a, b, 2).value);
  EXPECT_EQ(a2.spec, a.spec);
}

TEST(Serialize, RejectsMalformedMdpd) {
  EXPECT_THROW(mdpd_from_json(Json::parse("[]")), InputError);
  EXPECT_THROW(mdpd_from_json(Json::parse(R"({"points": []})")), InputError);
  const auto spec = to_json(uniform_spec(2, 2));
  Json j = {{"spec", spec}, {"points", Json::array({{{"factors", {{0, 1}}}, {"dims", {0}}, {"node_path", {0}}, {"level_path", {0}}}})}};
  EXPECT_THROW(mdpd_from_json(j), InputError);
  Json k = {{"spec", spec},
            {"points", Json::array({{{"factors", {{0, 1}, {1, 0}}},
                                     {"dims", {0, 0}},
                                     {"kinds", {"extended1", "ordinary0"}},
                                     {"node_path", {0}},
                                     {"level_path", {0}}}})}};
  EXPECT_THROW(mdpd_from_json(k), InputError);
  Json bad_spec = {{"spec", {{"fields", Json::array({{{"range_min", 1}, {"range_max", 0}, {"levels", 2}}})}}}, {"points", Json::array()}};
  EXPECT_THROW(mdpd_from_json(bad_spec), InputError);
}

TEST(Serialize, JcnAndMdrgShape) {
  std::mt19937_64 rng(45);
  const auto mf = oracle::random_grid(rng, 4, 4, 2);
  PipelineConfig cfg;
  cfg.spec = uniform_spec(2, 2);
  const auto r = run_pipeline(mf, cfg);
  const auto j = to_json(r.jcn, false);
  EXPECT_EQ(j["nodes"].size(), r.jcn.node_count());
  EXPECT_FALSE(j["nodes"][0].contains("members"));
  EXPECT_TRUE(to_json(r.jcn, true)["nodes"][0].contains("members"));
  EXPECT_EQ(j["edges"].size(), r.jcn.edges.size());
  const auto m = to_json(r.mdrg);
  EXPECT_EQ(m["children"].size(), r.mdrg.graph.node_count());
  EXPECT_FALSE(m["children"]["0"].contains("children"));
  const auto pd = to_json(r.diagrams.diagram);
  ASSERT_TRUE(pd.is_array());
  for (const auto& p : pd) {
    EXPECT_TRUE(p.contains("birth"));
    EXPECT_TRUE(p.contains("kind"));
  }
}

TEST(LoadMultifield, GridAndOffInputs) {
  const auto dir = scratch("load");
  {
    std::ofstream g(dir / "toy.grid");
    g << "GRID 2 2 1 2\n0 0.3 0.6 1\n1 0.6 0.3 0\n";
    std::ofstream o(dir / "tri.off");
    o << "OFF\n4 2 0\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n3 0 1 2\n3 1 3 2\n";
    std::ofstream c(dir / "f.csv");
    c << "vertex_id,value\n0,0.1\n1,0.2\n2,0.3\n3,0.4\n";
  }
  const auto grid = load_multifield(dir / "toy.grid");
  EXPECT_EQ(grid.field_count(), 2u);
  EXPECT_EQ(grid.vertex_count(), 4u);
  const std::vector<fs::path> csvs{dir / "f.csv", dir / "f.csv"};
  const auto off = load_multifield(dir / "tri.off", csvs);
  EXPECT_EQ(off.field_count(), 2u);
  EXPECT_EQ(off.fields[0].values, (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
  const auto synth = load_multifield(dir / "tri.off");
  EXPECT_EQ(synth.field_count(), 2u);
  EXPECT_THROW(load_multifield(dir / "toy.grid", csvs), ConfigError);
  EXPECT_THROW(load_multifield(dir / "nothing.xyz"), InputError);
  EXPECT_THROW(load_multifield(dir / "missing.off"), InputError);
  fs::remove_all(dir);
}
