#pragma once

#include <cstddef>
#include <vector>

namespace mdtopo {

// Dense row-major k x k matrix of non-negative costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(std::size_t k, double fill = 0.0) : k_(k), data_(k * k, fill) {}

  std::size_t size() const { return k_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * k_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * k_ + j]; }

 private:
  std::size_t k_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::size_t> column_of;  // row i is assigned column column_of[i]
  double total = 0.0;                  // sum of chosen costs in row order
};

// Minimum-cost perfect matching, O(k^3). Among optimal permutations the
// lexicographically smallest column_of is returned. Throws InputError on
// negative or non-finite entries.
Assignment hungarian(const CostMatrix& costs);

// Balanced transportation problem: supply[i] units leave row i, demand[j]
// units reach column j, each unit on (i, j) costs cost[i * cols + j].
// Totals of supply and demand must agree. Returns the minimum total cost;
// with unit supplies and demands it equals hungarian(costs).total up to
// rounding in the summation order.
double min_cost_transport(const std::vector<std::size_t>& supply, const std::vector<std::size_t>& demand,
                          const std::vector<double>& cost);

}  // namespace mdtopo
