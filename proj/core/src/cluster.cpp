#include "pcm/cluster.hpp"

#include <limits>
#include <numeric>

namespace pcm {

ClusterAssignment canonical_assignment(const std::vector<std::size_t>& raw_labels) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::size_t max_raw = 0;
  for (std::size_t l : raw_labels) max_raw = std::max(max_raw, l);
  std::vector<std::size_t> remap(raw_labels.empty() ? 0 : max_raw + 1, unset);
  ClusterAssignment out;
  out.labels.reserve(raw_labels.size());
  for (std::size_t l : raw_labels) {
    if (remap[l] == unset) {
      remap[l] = out.sizes.size();
      out.sizes.push_back(0);
    }
    out.labels.push_back(remap[l]);
    ++out.sizes[remap[l]];
  }
  return out;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) noexcept {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_size_[a] < rank_size_[b]) std::swap(a, b);
  parent_[b] = a;
  rank_size_[a] += rank_size_[b];
  return true;
}

std::vector<std::size_t> UnionFind::component_labels() {
  std::vector<std::size_t> roots(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) roots[i] = find(i);
  return canonical_assignment(roots).labels;
}

}  // namespace pcm
