#include "mdtopo/jcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mdtopo/error.hpp"
#include "mdtopo/union_find.hpp"

namespace mdtopo {

std::size_t QuantizationSpec::total_levels() const {
  std::size_t total = 1;
  for (const auto& f : fields) total *= static_cast<std::size_t>(f.levels);
  return total;
}

void QuantizationSpec::validate() const {
  if (fields.empty()) throw ConfigError("quantization spec has no fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& f = fields[i];
    if (f.levels < 1) throw ConfigError("field " + std::to_string(i) + ": level count must be >= 1");
    if (!std::isfinite(f.range_min) || !std::isfinite(f.range_max) || !(f.range_max > f.range_min))
      throw ConfigError("field " + std::to_string(i) + ": range_max must exceed range_min");
  }
}

QuantizationSpec uniform_spec(std::size_t field_count, int levels, double range_min, double range_max) {
  QuantizationSpec spec;
  spec.fields.assign(field_count, FieldQuantization{range_min, range_max, levels});
  spec.validate();
  return spec;
}

QuantizationSpec corpus_spec(std::span<const MultiField> corpus, std::span<const int> levels) {
  if (corpus.empty()) throw InputError("empty corpus");
  const std::size_t n = corpus.front().field_count();
  if (levels.size() != n) throw ConfigError("expected " + std::to_string(n) + " level counts");
  QuantizationSpec spec;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& mf : corpus) {
      if (mf.field_count() != n) throw InputError("corpus objects have different field counts");
      for (double v : mf.fields[i].values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!std::isfinite(lo)) throw InputError("corpus field " + std::to_string(i) + " has no values");
    if (!(hi > lo)) hi = lo + 1.0;
    spec.fields.push_back({lo, hi, levels[i]});
  }
  spec.validate();
  return spec;
}

int quantize(double value, const FieldQuantization& q, std::size_t* clamped) {
  if (clamped && (value < q.range_min || value > q.range_max)) ++*clamped;
  const double t = std::floor((value - q.range_min) / q.width());
  if (!(t > 0)) return 0;
  if (t >= q.levels - 1) return q.levels - 1;
  return static_cast<int>(t);
}

std::vector<std::vector<std::size_t>> JointContourNet::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

JointContourNet build_jcn(const MultiField& mf, const QuantizationSpec& spec) {
  spec.validate();
  mf.validate();
  if (spec.field_count() != mf.field_count())
    throw ConfigError("quantization spec has " + std::to_string(spec.field_count()) + " fields, data has " +
                      std::to_string(mf.field_count()));
  const std::size_t nv = mf.vertex_count();
  if (nv == 0) throw InputError("empty mesh");
  const std::size_t nf = mf.field_count();

  JointContourNet jcn;
  jcn.spec = spec;

  std::vector<int> levels(nv * nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t v = 0; v < nv; ++v)
      levels[v * nf + f] = quantize(mf.fields[f].values[v], spec.fields[f], &jcn.clamped_values);
  auto same_tuple = [&](std::size_t a, std::size_t b) {
    return std::equal(levels.begin() + a * nf, levels.begin() + (a + 1) * nf, levels.begin() + b * nf);
  };

  const auto carrier_edges = mf.carrier_edges();
  UnionFind uf(nv);
  for (const auto& [a, b] : carrier_edges)
    if (same_tuple(a, b)) uf.unite(a, b);

  std::size_t count = 0;
  const auto label = component_labels(uf, &count);
  jcn.nodes.resize(count);
  for (std::size_t v = 0; v < nv; ++v) {
    auto& node = jcn.nodes[label[v]];
    if (node.members.empty()) node.levels.assign(levels.begin() + v * nf, levels.begin() + (v + 1) * nf);
    node.members.push_back(v);
  }

  for (const auto& [a, b] : carrier_edges) {
    const std::size_t la = label[a], lb = label[b];
    if (la != lb) jcn.edges.emplace_back(std::min(la, lb), std::max(la, lb));
  }
  std::sort(jcn.edges.begin(), jcn.edges.end());
  jcn.edges.erase(std::unique(jcn.edges.begin(), jcn.edges.end()), jcn.edges.end());
  return jcn;
}

}  // namespace mdtopo
