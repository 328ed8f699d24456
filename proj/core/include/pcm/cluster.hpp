#pragma once

#include <cstddef>
#include <vector>

#include "pcm/matrix.hpp"

namespace pcm {

/// Partition of points into P clusters. Ids run 0..P-1 and are assigned in
/// order of first appearance, so two equal partitions always compare equal.
/// `centers` is P x M, or empty when no coordinates exist (graph runs).
struct ClusterAssignment {
  std::vector<std::size_t> labels;
  Matrix centers;
  std::vector<std::size_t> sizes;

  std::size_t cluster_count() const noexcept { return sizes.size(); }
  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

// Relabels by first appearance and recomputes sizes. Centers are cleared.
ClusterAssignment canonical_assignment(const std::vector<std::size_t>& raw_labels);

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x) noexcept;
  // Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) noexcept;
  std::size_t size() const noexcept { return parent_.size(); }

  // Component index per element, numbered by first appearance.
  std::vector<std::size_t> component_labels();

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_size_;
};

}  // namespace pcm
