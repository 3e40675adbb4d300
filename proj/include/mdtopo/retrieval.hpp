#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdtopo/mdpd.hpp"

namespace mdtopo {

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major

  std::size_t size() const { return ids.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }

  // Throws InputError unless square, finite, non-negative, symmetric and
  // zero on the diagonal.
  void validate() const;
};

struct RetrievalScores {
  double nn = 0.0;
  double ft = 0.0;
  double st = 0.0;
  double e_measure = 0.0;
  double dcg = 0.0;
  std::size_t queries = 0;  // queries that entered the averages
  std::vector<std::string> warnings;
};

// Per query: the other objects ranked by distance, ties by index.
//   NN  = 1 if the first result shares the query's class C
//   FT  = hits in the top |C|-1, divided by |C|-1
//   ST  = hits in the top 2(|C|-1), divided by |C|-1
//   E   = 2PR/(P+R) over the top K (K = min(e_k, N-1)), P = hits/K,
//         R = hits/(|C|-1)
//   DCG = (G_1 + sum_{i>=2} G_i / log2(i)) divided by the same sum for the
//         ideal ranking, G_i = 1 if result i is in C
// Scores are averaged over queries. Queries whose class has a single
// member are skipped and reported in `warnings`.
RetrievalScores evaluate(const DistanceMatrix& matrix, std::span<const std::string> labels, std::size_t e_k = 32);

// Upper triangle computed with mdrg_distance, mirrored.
DistanceMatrix distance_matrix(std::span<const Mdpd> corpus, std::span<const std::string> ids, double q,
                               unsigned jobs = 1);

// Element-wise mean of matrices with identical ids.
DistanceMatrix average(std::span<const DistanceMatrix> matrices);

void write_matrix_csv(std::ostream& out, const DistanceMatrix& m);
DistanceMatrix read_matrix_csv(std::istream& in);

// Binary P5 greyscale image, one pixel per entry, min-max scaled to 0..255.
void write_pgm(std::ostream& out, const DistanceMatrix& m);
// Binary P6 image; scaled value t in [0,1] maps linearly from blue
// (0,0,255) at t = 0 to red (255,0,0) at t = 1.
void write_ppm(std::ostream& out, const DistanceMatrix& m);

}  // namespace mdtopo
