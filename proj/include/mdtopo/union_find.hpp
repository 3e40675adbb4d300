#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace mdtopo {

// Weighted union-find with path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // Returns false if already in the same set.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Dense component labels 0..k-1, numbered in order of the smallest member.
inline std::vector<std::size_t> component_labels(UnionFind& uf, std::size_t* count = nullptr) {
  const std::size_t n = uf.size();
  std::vector<std::size_t> root_label(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> labels(n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = uf.find(i);
    if (root_label[r] == static_cast<std::size_t>(-1)) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  if (count) *count = next;
  return labels;
}

}  // namespace mdtopo
