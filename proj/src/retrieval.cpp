#include "mdtopo/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mdtopo/distance.hpp"
#include "mdtopo/error.hpp"
#include "mdtopo/parallel.hpp"

namespace mdtopo {

void DistanceMatrix::validate() const {
  const std::size_t n = ids.size();
  if (values.size() != n * n) throw InputError("distance matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0.0) throw InputError("distance matrix diagonal entry " + ids[i] + " is not zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double a = (*this)(i, j), b = (*this)(j, i);
      if (!std::isfinite(a) || a < 0) throw InputError("distance matrix has a negative or non-finite entry");
      if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
        throw InputError("distance matrix is not symmetric at (" + ids[i] + ", " + ids[j] + ")");
    }
  }
}

RetrievalScores evaluate(const DistanceMatrix& matrix, std::span<const std::string> labels, std::size_t e_k) {
  matrix.validate();
  const std::size_t n = matrix.size();
  if (labels.size() != n) throw InputError("expected one label per matrix row");
  if (e_k == 0) throw ConfigError("E-measure K must be positive");
  std::map<std::string, std::size_t> class_size;
  for (const auto& l : labels) ++class_size[l];

  RetrievalScores s;
  std::vector<std::size_t> ranking;
  for (std::size_t qi = 0; qi < n; ++qi) {
    const std::size_t relevant = class_size[labels[qi]] - 1;
    if (relevant == 0) {
      s.warnings.push_back("query " + matrix.ids[qi] + " skipped: class '" + labels[qi] + "' has one member");
      continue;
    }
    ranking.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != qi) ranking.push_back(j);
    std::sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
      const double da = matrix(qi, a), db = matrix(qi, b);
      if (da != db) return da < db;
      return a < b;
    });
    auto hit = [&](std::size_t rank) { return labels[ranking[rank]] == labels[qi] ? 1.0 : 0.0; };
    auto hits_in = [&](std::size_t k) {
      double h = 0;
      for (std::size_t r = 0; r < std::min(k, ranking.size()); ++r) h += hit(r);
      return h;
    };

    s.nn += hit(0);
    s.ft += hits_in(relevant) / relevant;
    s.st += hits_in(2 * relevant) / relevant;

    const std::size_t k = std::min(e_k, ranking.size());
    const double h = hits_in(k);
    const double precision = h / k;
    const double recall = h / relevant;
    if (precision + recall > 0) s.e_measure += 2 * precision * recall / (precision + recall);

    double dcg = hit(0);
    double ideal = 1.0;
    for (std::size_t r = 1; r < ranking.size(); ++r) {
      const double discount = std::log2(static_cast<double>(r + 1));
      dcg += hit(r) / discount;
      if (r < relevant) ideal += 1.0 / discount;
    }
    s.dcg += dcg / ideal;
    ++s.queries;
  }
  if (s.queries > 0) {
    const double m = static_cast<double>(s.queries);
    s.nn /= m;
    s.ft /= m;
    s.st /= m;
    s.e_measure /= m;
    s.dcg /= m;
  }
  return s;
}

DistanceMatrix distance_matrix(std::span<const Mdpd> corpus, std::span<const std::string> ids, double q,
                               unsigned jobs) {
  const std::size_t n = corpus.size();
  if (ids.size() != n) throw InputError("expected one id per corpus object");
  for (std::size_t i = 1; i < n; ++i)
    if (!(corpus[i].spec == corpus[0].spec))
      throw InputError("corpus objects " + ids[0] + " and " + ids[i] + " use different quantization specs");
  DistanceMatrix m;
  m.ids.assign(ids.begin(), ids.end());
  m.values.assign(n * n, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double d = mdrg_distance(corpus[i], corpus[j], q).value;
    m(i, j) = d;
    m(j, i) = d;
  });
  return m;
}

DistanceMatrix average(std::span<const DistanceMatrix> matrices) {
  if (matrices.empty()) throw InputError("nothing to average");
  DistanceMatrix out = matrices.front();
  for (std::size_t k = 1; k < matrices.size(); ++k) {
    if (matrices[k].ids != out.ids) throw InputError("averaged matrices have different ids");
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += matrices[k].values[i];
  }
  for (auto& v : out.values) v /= static_cast<double>(matrices.size());
  return out;
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& m) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "id";
  for (const auto& id : m.ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.ids[i];
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

DistanceMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty matrix CSV");
  auto header = split_csv(line);
  if (header.empty()) throw InputError("matrix CSV header is empty");
  DistanceMatrix m;
  m.ids.assign(header.begin() + 1, header.end());
  const std::size_t n = m.ids.size();
  m.values.reserve(n * n);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != n + 1) throw InputError("matrix CSV row " + std::to_string(rows + 1) + " has the wrong width");
    if (rows >= n || cells[0] != m.ids[rows]) throw InputError("matrix CSV row ids do not follow the header");
    for (std::size_t j = 1; j <= n; ++j) {
      std::istringstream ss(cells[j]);
      double v = 0;
      if (!(ss >> v)) throw InputError("matrix CSV has a non-numeric entry '" + cells[j] + "'");
      m.values.push_back(v);
    }
    ++rows;
  }
  if (rows != n) throw InputError("matrix CSV has " + std::to_string(rows) + " rows for " + std::to_string(n) + " ids");
  m.validate();
  return m;
}

namespace {

std::vector<double> scaled(const DistanceMatrix& m) {
  std::vector<double> t(m.values.size(), 0.0);
  if (m.values.empty()) return t;
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  const double range = *hi - *lo;
  if (range > 0)
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = (m.values[i] - *lo) / range;
  return t;
}

unsigned char byte(double t) { return static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0)); }

}  // namespace

void write_pgm(std::ostream& out, const DistanceMatrix& m) {
  out << "P5\n" << m.size() << ' ' << m.size() << "\n255\n";
  for (double t : scaled(m)) out.put(static_cast<char>(byte(t)));
}

void write_ppm(std::ostream& out, const DistanceMatrix& m) {
  out << "P6\n" << m.size() << ' ' << m.size() << "\n255\n";
  for (double t : scaled(m)) {
    out.put(static_cast<char>(byte(t)));
    out.put(0);
    out.put(static_cast<char>(byte(1.0 - t)));
  }
}

}  // namespace mdtopo
