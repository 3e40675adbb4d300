// mdtopo: command line driver for the multi-field topology pipeline.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdtopo/distance.hpp"
#include "mdtopo/error.hpp"
#include "mdtopo/parallel.hpp"
#include "mdtopo/pipeline.hpp"
#include "mdtopo/retrieval.hpp"
#include "mdtopo/serialize.hpp"

namespace fs = std::filesystem;
using namespace mdtopo;

namespace {

struct ManifestEntry {
  std::string id;
  fs::path path;
  std::string label;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() < 2 || cells.size() > 3 || cells[0].empty() || cells[1].empty())
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected 'id, path, label'");
    ManifestEntry e{cells[0], cells[1], cells.size() == 3 ? cells[2] : ""};
    if (e.path.is_relative()) e.path = path.parent_path() / e.path;
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw InputError("manifest " + path.string() + " lists no objects");
  std::map<std::string, int> seen;
  for (const auto& e : entries)
    if (seen[e.id]++) throw InputError("manifest id '" + e.id + "' appears twice");
  return entries;
}

std::vector<std::size_t> parse_order(const std::string& s) {
  std::vector<std::size_t> order;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(cell, &used);
      if (used != cell.size() || v < 0) throw std::invalid_argument(cell);
      order.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("bad field order '" + s + "'");
    }
  }
  return order;
}

// Options shared by commands that quantize data.
struct QuantOptions {
  std::vector<int> levels;
  std::vector<std::string> ranges;
  std::vector<std::string> orders;
  std::optional<double> epsilon;
  unsigned jobs = 1;

  void add_to(CLI::App* cmd, bool multiple_orders) {
    cmd->add_option("--levels", levels, "Quantization levels per field, e.g. 16,16")->delimiter(',')->required();
    cmd->add_option("--range", ranges, "Field range 'i:min:max' (original field index), or 'corpus'");
    auto* o = cmd->add_option("--order", orders, "Field order permutation, e.g. 1,0");
    if (!multiple_orders) o->expected(1);
    cmd->add_option("--epsilon", epsilon, "Degeneracy offset (default 1e-6 of the level width)");
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }

  std::vector<std::vector<std::size_t>> field_orders(std::size_t n) const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& o : orders) out.push_back(parse_order(o));
    if (out.empty()) {
      out.emplace_back();
      for (std::size_t i = 0; i < n; ++i) out.back().push_back(i);
    }
    for (const auto& o : out) {
      std::vector<std::size_t> sorted = o;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != i || sorted.size() != n)
          throw ConfigError("field order must be a permutation of 0.." + std::to_string(n - 1));
    }
    return out;
  }

  // Ranges indexed by original field.
  std::vector<FieldQuantization> base_ranges(std::span<const MultiField> corpus) const {
    const std::size_t n = corpus.front().field_count();
    if (levels.size() != n)
      throw ConfigError("--levels needs " + std::to_string(n) + " values, got " + std::to_string(levels.size()));
    for (int l : levels)
      if (l < 1) throw ConfigError("quantization levels must be >= 1");
    std::vector<FieldQuantization> out(n, FieldQuantization{0.0, 1.0, 1});
    bool corpus_wide = false;
    for (const auto& r : ranges) {
      if (r == "corpus") {
        corpus_wide = true;
        continue;
      }
      std::stringstream ss(r);
      std::string a, b, c;
      if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw ConfigError("bad --range '" + r + "' (expected i:min:max)");
      try {
        const std::size_t i = std::stoul(a);
        if (i >= n) throw ConfigError("--range field index " + a + " out of range");
        out[i].range_min = std::stod(b);
        out[i].range_max = std::stod(c);
      } catch (const std::logic_error&) {
        throw ConfigError("bad --range '" + r + "' (expected i:min:max)");
      }
    }
    if (corpus_wide) {
      const std::vector<int> ones(n, 1);
      const auto spec = corpus_spec(corpus, ones);
      for (std::size_t i = 0; i < n; ++i) {
        out[i].range_min = spec.fields[i].range_min;
        out[i].range_max = spec.fields[i].range_max;
      }
    }
    return out;
  }

  PipelineConfig config(const std::vector<FieldQuantization>& base, const std::vector<std::size_t>& order) const {
    PipelineConfig c;
    c.order = order;
    for (std::size_t i = 0; i < order.size(); ++i) {
      FieldQuantization f = base[order[i]];
      f.levels = levels[i];
      c.spec.fields.push_back(f);
    }
    c.spec.validate();
    if (epsilon && !(*epsilon > 0)) throw ConfigError("--epsilon must be positive");
    c.epsilon = epsilon;
    c.jobs = jobs;
    return c;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(1) + "\n"); }

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

DistanceMatrix read_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_matrix_csv(in);
}

int run(int argc, char** argv) {
  CLI::App app{"Topological distance between multi-fields"};
  app.require_subcommand(1);

  // fields
  fs::path fields_mesh, fields_out = ".";
  std::string which = "both";
  unsigned fields_jobs = 1;
  auto* fields = app.add_subcommand("fields", "Synthesize geodesic / Euclidean descriptor fields for a mesh");
  fields->add_option("mesh", fields_mesh, "OFF mesh")->required();
  fields->add_option("--which", which, "geodesic, euclidean or both")
      ->check(CLI::IsMember({"geodesic", "euclidean", "both"}));
  fields->add_option("--out", fields_out, "Output directory");
  fields->add_option("--jobs", fields_jobs)->check(CLI::PositiveNumber);

  // pipeline
  fs::path pipe_input, pipe_out = ".";
  std::vector<fs::path> pipe_fields;
  bool pipe_members = false;
  QuantOptions pipe_q;
  auto* pipeline = app.add_subcommand("pipeline", "Write jcn.json, mdrg.json and mdpd.json for one input");
  pipeline->add_option("input", pipe_input, ".off mesh or .grid file")->required();
  pipeline->add_option("--fields", pipe_fields, "Per-vertex field CSVs for a mesh, in order")->delimiter(',');
  pipeline->add_option("--out", pipe_out, "Output directory");
  pipeline->add_flag("--members", pipe_members, "Include member vertices in jcn.json");
  pipe_q.add_to(pipeline, false);

  // dist
  fs::path dist_a, dist_b;
  std::optional<fs::path> dist_transcript;
  double dist_q = 2.0;
  auto* dist = app.add_subcommand("dist", "Distance between two MDPD files");
  dist->add_option("a", dist_a)->required();
  dist->add_option("b", dist_b)->required();
  dist->add_option("--q", dist_q, "Wasserstein exponent");
  dist->add_option("--transcript", dist_transcript, "Write the per-level matching as JSON");

  // matrix
  fs::path matrix_manifest, matrix_out = "matrix.csv";
  double matrix_q = 2.0;
  QuantOptions matrix_qo;
  auto* matrix = app.add_subcommand("matrix", "Distance matrix over a corpus manifest ('id, path, label' lines)");
  matrix->add_option("--manifest", matrix_manifest)->required();
  matrix->add_option("--out", matrix_out);
  matrix->add_option("--q", matrix_q, "Wasserstein exponent");
  matrix_qo.add_to(matrix, true);
  matrix->get_option("--levels")->required(false);

  // eval
  fs::path eval_matrix, eval_manifest;
  std::optional<fs::path> eval_out;
  std::size_t eval_k = 32;
  auto* eval = app.add_subcommand("eval", "Retrieval scores (NN, FT, ST, E, DCG) for a distance matrix");
  eval->add_option("--matrix", eval_matrix)->required();
  eval->add_option("--manifest", eval_manifest, "Manifest providing the labels")->required();
  eval->add_option("--e-k", eval_k, "Cut-off K of the E-measure")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_out, "Scores JSON (stdout if omitted)");

  // heatmap
  fs::path heat_matrix, heat_out = "heatmap.pgm";
  std::optional<fs::path> heat_ppm;
  auto* heatmap = app.add_subcommand("heatmap", "Render a distance matrix as PGM (and optionally PPM)");
  heatmap->add_option("--matrix", heat_matrix)->required();
  heatmap->add_option("--out", heat_out, "PGM output");
  heatmap->add_option("--ppm", heat_ppm, "Colour PPM output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (*fields) {
    const SimplicialMesh mesh = load_mesh(fields_mesh);
    const auto stem = fields_mesh.stem().string();
    auto emit = [&](const VertexField& f) {
      std::ostringstream os;
      write_field_csv(os, f);
      const auto path = fields_out / (stem + "_" + f.name + ".csv");
      write_text(path, os.str());
      std::cout << path.string() << "\n";
    };
    if (which != "euclidean") emit(geodesic_field(mesh, fields_jobs));
    if (which != "geodesic") emit(euclidean_field(mesh, fields_jobs));
    return 0;
  }

  if (*pipeline) {
    const MultiField mf = load_multifield(pipe_input, pipe_fields, pipe_q.jobs);
    const std::vector<MultiField> corpus{mf};
    const auto base = pipe_q.base_ranges(corpus);
    const auto order = pipe_q.field_orders(mf.field_count()).front();
    const PipelineConfig config = pipe_q.config(base, order);
    const MultiField ordered = mf.reordered(order);
    const JointContourNet jcn = build_jcn(ordered, config.spec);
    if (jcn.clamped_values > 0)
      std::cerr << "warning: " << jcn.clamped_values << " values outside the quantization range were clamped\n";
    write_json(pipe_out / "jcn.json", to_json(jcn, pipe_members));
    const Mdrg mdrg = build_mdrg(jcn, config.jobs);
    write_json(pipe_out / "mdrg.json", to_json(mdrg));
    if (mf.field_count() < 2) throw ConfigError("an MDPD needs at least two fields; mdpd.json not written");
    const MdrgDiagrams diagrams = compute_diagrams(mdrg, config.spec, config.epsilon, config.jobs);
    Mdpd mdpd = construct_mdpd(mdrg, diagrams, config.spec);
    mdpd.order = order;
    write_json(pipe_out / "mdpd.json", to_json(mdpd));
    return 0;
  }

  if (*dist) {
    const Mdpd a = mdpd_from_json(read_json(dist_a));
    const Mdpd b = mdpd_from_json(read_json(dist_b));
    const DistanceResult r = mdrg_distance(a, b, dist_q);
    std::cout.precision(17);
    std::cout << r.value << "\n";
    if (dist_transcript) write_json(*dist_transcript, to_json(r, true));
    return 0;
  }

  if (*matrix) {
    const auto entries = read_manifest(matrix_manifest);
    std::vector<std::string> ids;
    for (const auto& e : entries) ids.push_back(e.id);
    const bool precomputed = std::all_of(entries.begin(), entries.end(),
                                         [](const auto& e) { return e.path.extension() == ".json"; });
    std::vector<DistanceMatrix> matrices;
    if (precomputed) {
      std::vector<Mdpd> corpus;
      for (const auto& e : entries) corpus.push_back(mdpd_from_json(read_json(e.path)));
      matrices.push_back(distance_matrix(corpus, ids, matrix_q, matrix_qo.jobs));
    } else {
      if (matrix_qo.levels.empty()) throw ConfigError("--levels is required unless every manifest entry is an MDPD");
      std::vector<MultiField> fields(entries.size());
      parallel_for(entries.size(), matrix_qo.jobs, [&](std::size_t i) {
        if (entries[i].path.extension() == ".json")
          throw ConfigError("manifest mixes MDPD files with raw inputs");
        fields[i] = load_multifield(entries[i].path, {}, 1);
      });
      for (const auto& f : fields)
        if (f.field_count() != fields.front().field_count())
          throw InputError("manifest objects have different field counts");
      const auto base = matrix_qo.base_ranges(fields);
      for (const auto& order : matrix_qo.field_orders(fields.front().field_count())) {
        const PipelineConfig config = matrix_qo.config(base, order);
        std::vector<Mdpd> corpus(fields.size());
        PipelineConfig serial = config;
        serial.jobs = 1;
        parallel_for(fields.size(), matrix_qo.jobs, [&](std::size_t i) { corpus[i] = compute_mdpd(fields[i], serial); });
        matrices.push_back(distance_matrix(corpus, ids, matrix_q, matrix_qo.jobs));
      }
    }
    std::ostringstream os;
    write_matrix_csv(os, average(matrices));
    write_text(matrix_out, os.str());
    return 0;
  }

  if (*eval) {
    const DistanceMatrix m = read_matrix(eval_matrix);
    std::map<std::string, std::string> label_of;
    for (const auto& e : read_manifest(eval_manifest)) {
      if (e.label.empty()) throw InputError("manifest entry '" + e.id + "' has no label");
      label_of[e.id] = e.label;
    }
    std::vector<std::string> labels;
    for (const auto& id : m.ids) {
      const auto it = label_of.find(id);
      if (it == label_of.end()) throw InputError("no label for matrix id '" + id + "'");
      labels.push_back(it->second);
    }
    const RetrievalScores s = evaluate(m, labels, eval_k);
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
    const std::string text = to_json(s).dump(1) + "\n";
    if (eval_out)
      write_text(*eval_out, text);
    else
      std::cout << text;
    return 0;
  }

  if (*heatmap) {
    const DistanceMatrix m = read_matrix(heat_matrix);
    std::ostringstream pgm;
    write_pgm(pgm, m);
    write_text(heat_out, pgm.str());
    if (heat_ppm) {
      std::ostringstream ppm;
      write_ppm(ppm, m);
      write_text(*heat_ppm, ppm.str());
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
