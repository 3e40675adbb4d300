#include "mdtopo/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mdtopo/error.hpp"

namespace mdtopo {

namespace {

constexpr std::size_t none = static_cast<std::size_t>(-1);

}  // namespace

Assignment hungarian(const CostMatrix& costs) {
  const std::size_t k = costs.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double c = costs(i, j);
      if (!std::isfinite(c) || c < 0)
        throw InputError("cost matrix entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative or not finite");
      scale = std::max(scale, c);
    }
  Assignment result;
  if (k == 0) return result;

  // Shortest augmenting paths with potentials; index 0 is a sentinel.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = costs(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col(k), row(k);
  for (std::size_t j = 1; j <= k; ++j) {
    col[p[j] - 1] = j - 1;
    row[j - 1] = p[j] - 1;
  }

  // Every perfect matching on tight edges is optimal. Fix rows in order,
  // giving each the smallest column that still admits a completion.
  const double tol = 1e-10 * std::max(1.0, scale);
  auto tight = [&](std::size_t i, std::size_t j) { return costs(i, j) - u[i + 1] - v[j + 1] <= tol; };
  std::vector<std::size_t> parent(k);
  std::vector<char> good(k);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t freed = col[i];
    std::fill(good.begin(), good.end(), 0);
    good[freed] = 1;
    parent[freed] = none;
    queue.assign(1, freed);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t g = queue[q];
      for (std::size_t r = i + 1; r < k; ++r) {
        if (good[col[r]] || !tight(r, g)) continue;
        good[col[r]] = 1;
        parent[col[r]] = g;
        queue.push_back(col[r]);
      }
    }
    std::size_t best = freed;
    for (std::size_t j = 0; j < freed; ++j)
      if (good[j] && tight(i, j)) {
        best = j;
        break;
      }
    if (best == freed) continue;
    std::vector<std::size_t> path{best};
    while (path.back() != freed) path.push_back(parent[path.back()]);
    std::vector<std::size_t> owners;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) owners.push_back(row[path[t]]);
    for (std::size_t t = 0; t < owners.size(); ++t) {
      col[owners[t]] = path[t + 1];
      row[path[t + 1]] = owners[t];
    }
    col[i] = best;
    row[best] = i;
  }

  result.column_of = col;
  for (std::size_t i = 0; i < k; ++i) result.total += costs(i, col[i]);
  return result;
}

}  // namespace mdtopo

namespace mdtopo {

double min_cost_transport(const std::vector<std::size_t>& supply, const std::vector<std::size_t>& demand,
                          const std::vector<double>& cost) {
  const std::size_t rows = supply.size(), cols = demand.size();
  if (cost.size() != rows * cols) throw InputError("transport cost matrix has the wrong size");
  std::size_t total_supply = 0, total_demand = 0;
  for (auto s : supply) total_supply += s;
  for (auto d : demand) total_demand += d;
  if (total_supply != total_demand) throw InputError("transport supply and demand totals differ");
  for (double c : cost)
    if (!std::isfinite(c) || c < 0) throw InputError("transport cost is negative or not finite");
  if (total_supply == 0) return 0.0;

  // Successive shortest paths with potentials on the bipartite residual
  // graph. Node ids: rows 0..rows-1, columns rows..rows+cols-1.
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = rows + cols;
  std::vector<std::size_t> excess = supply, missing = demand;
  std::vector<std::size_t> flow(rows * cols, 0);
  std::vector<double> pot(n, 0.0), dist(n);
  std::vector<std::size_t> prev(n);
  std::vector<char> done(n);
  std::size_t left = total_supply;
  // Column minima make every reduced cost non-negative; route what fits
  // along the resulting tight edges before searching for paths.
  for (std::size_t j = 0; j < cols; ++j) {
    double m = inf;
    for (std::size_t i = 0; i < rows; ++i) m = std::min(m, cost[i * cols + j]);
    pot[rows + j] = rows ? m : 0.0;
  }
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols && excess[i] > 0; ++j) {
      if (missing[j] == 0 || cost[i * cols + j] != pot[rows + j]) continue;
      const std::size_t amount = std::min(excess[i], missing[j]);
      flow[i * cols + j] += amount;
      excess[i] -= amount;
      missing[j] -= amount;
      left -= amount;
    }
  while (left > 0) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), 0);
    std::fill(prev.begin(), prev.end(), none);
    for (std::size_t i = 0; i < rows; ++i)
      if (excess[i] > 0) dist[i] = 0.0;
    std::size_t target = none;
    for (;;) {
      std::size_t v = none;
      for (std::size_t x = 0; x < n; ++x)
        if (!done[x] && dist[x] < inf && (v == none || dist[x] < dist[v])) v = x;
      if (v == none) break;
      done[v] = 1;
      if (v >= rows && missing[v - rows] > 0) {
        target = v;
        break;
      }
      if (v < rows) {
        for (std::size_t j = 0; j < cols; ++j) {
          const std::size_t w = rows + j;
          if (done[w]) continue;
          const double nd = dist[v] + std::max(0.0, cost[v * cols + j] + pot[v] - pot[w]);
          if (nd < dist[w]) {
            dist[w] = nd;
            prev[w] = v;
          }
        }
      } else {
        const std::size_t j = v - rows;
        for (std::size_t i = 0; i < rows; ++i) {
          if (done[i] || flow[i * cols + j] == 0) continue;
          const double nd = dist[v] + std::max(0.0, pot[v] - pot[i] - cost[i * cols + j]);
          if (nd < dist[i]) {
            dist[i] = nd;
            prev[i] = v;
          }
        }
      }
    }
    if (target == none) throw InputError("transport problem has no feasible augmentation");
    const double reach = dist[target];
    for (std::size_t x = 0; x < n; ++x) pot[x] += std::min(dist[x], reach);

    std::size_t amount = missing[target - rows];
    std::size_t v = target;
    while (prev[v] != none) {
      const std::size_t u = prev[v];
      if (u >= rows) amount = std::min(amount, flow[v * cols + (u - rows)]);
      v = u;
    }
    amount = std::min(amount, excess[v]);
    excess[v] -= amount;
    missing[target - rows] -= amount;
    left -= amount;
    for (v = target; prev[v] != none; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u < rows)
        flow[u * cols + (v - rows)] += amount;
      else
        flow[v * cols + (u - rows)] -= amount;
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (flow[i * cols + j] > 0) total += static_cast<double>(flow[i * cols + j]) * cost[i * cols + j];
  return total;
}

}  // namespace mdtopo
