#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pcm/cluster.hpp"

namespace pcm {

namespace detail {

// Shared by the Euclidean and graph variants. `dist(i, j)` is the distance
// between items, `mass[i]` their weight.
template <typename Distance>
std::vector<std::size_t> merge_labels(std::vector<std::size_t> labels,
                                      const std::vector<double>& mass, std::size_t min_size,
                                      Distance dist) {
  for (;;) {
    ClusterAssignment a = canonical_assignment(labels);
    labels = a.labels;
    const std::size_t p = a.sizes.size();
    if (p <= 1) break;
    std::vector<double> size(p, 0.0);
    std::vector<std::vector<std::size_t>> members(p);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      size[labels[i]] += mass[i];
      members[labels[i]].push_back(i);
    }
    const auto below = [&](std::size_t c) {
      return std::llround(size[c]) < static_cast<long long>(min_size);
    };
    std::size_t smallest = p;
    for (std::size_t c = 0; c < p; ++c)
      if (below(c) && (smallest == p || size[c] < size[smallest])) smallest = c;
    if (smallest == p) break;

    std::size_t target = p;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < p; ++c) {
      if (c == smallest) continue;
      double num = 0.0, den = 0.0;
      for (std::size_t i : members[smallest])
        for (std::size_t j : members[c]) {
          const double w = mass[i] * mass[j];
          num += w * dist(i, j);
          den += w;
        }
      const double avg = num / den;
      if (avg < best) {
        best = avg;
        target = c;
      }
    }
    for (std::size_t i : members[smallest]) labels[i] = target;
  }
  return labels;
}

}  // namespace detail

}  // namespace pcm
