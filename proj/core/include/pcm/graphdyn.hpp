#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcm/cluster.hpp"
#include "pcm/matrix.hpp"

namespace pcm {

/// Symmetric, nonnegative, zero-diagonal N x N matrix of pairwise distances.
struct DistanceMatrix {
  Matrix entries;

  static DistanceMatrix from_points(const Matrix& points);

  std::size_t size() const noexcept { return entries.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries(i, j); }

  // Throws ArgumentError when not square, asymmetric, nonzero on the
  // diagonal or negative; NumericError on non-finite entries.
  void validate() const;
};

/// Rate of change of every pairwise distance under the untruncated Gaussian
/// flow, written through the law of cosines so only distances are needed:
///
///   d'_ij = sum_k w_ik d_ik cos(pi - a_jik) + w_jk d_jk cos(pi - a_ijk)
///   w_ik = exp(-d_ik^2 / sigma^2)
///   cos(pi - a_jik) = (d_jk^2 - d_ij^2 - d_ik^2) / (2 d_ij d_ik)
///
/// A summand whose distance factor is zero contributes zero, and each cosine
/// is clamped to [-1, 1]. The diagonal is exactly zero and the result is
/// exactly symmetric.
Matrix distance_rhs(const DistanceMatrix& distances, double sigma);

// 1 / max_i sum_{k != i} exp(-d_ik^2/sigma^2), +inf when all weights vanish.
double graph_stability_max_dt(const DistanceMatrix& distances, double sigma);

struct GraphEvolution {
  DistanceMatrix distances;
  std::size_t iterations = 0;
  std::size_t clamp_events = 0;  // entries projected back to zero
  bool converged = false;
};

/// Euler iteration D <- max(0, D + dt * distance_rhs(D)) until the mean
/// absolute entry change per pair drops below stop_tol or max_iters is
/// reached.
/// Throws NumericError naming the iteration when a value turns non-finite.
GraphEvolution evolve_distances(const DistanceMatrix& initial, double sigma, double dt,
                                std::size_t max_iters, double stop_tol);

// Components of the graph with edges d_ij < threshold. Centers stay empty.
ClusterAssignment extract_graph_clusters(const DistanceMatrix& distances, double threshold);

// merge_small_clusters() using average distances read from the matrix.
ClusterAssignment merge_small_graph_clusters(const ClusterAssignment& assignment,
                                             const DistanceMatrix& distances,
                                             std::size_t min_size);

// Classical-MDS test: the doubly centred Gram matrix -1/2 J D^2 J has no
// eigenvalue below -tolerance * its largest magnitude.
bool is_euclidean_embeddable(const DistanceMatrix& distances, double tolerance = 1e-8);

struct GraphClusterConfig {
  std::optional<double> sigma;      // auto-tuned from the entries when absent
  std::size_t dimension = 1;        // divisor used by the sigma heuristic
  // Defaults to 0.5 * graph_stability_max_dt, capped at 1. The linearised
  // distance update overshoots zero for fast-closing pairs at the larger
  // step used by the particle flow.
  std::optional<double> dt;
  std::size_t max_iters = 10000;
  double stop_tol = 1e-5;
  std::optional<double> threshold;  // defaults to 3 sigma
  double min_cluster_fraction = 0.05;
};

struct GraphClusterResult {
  ClusterAssignment assignment;
  GraphEvolution evolution;
  double sigma = 0.0;
  double dt = 0.0;
  double threshold = 0.0;
  std::vector<std::string> warnings;
};

GraphClusterResult run_graph_clustering(const DistanceMatrix& distances,
                                        const GraphClusterConfig& config = {});

}  // namespace pcm
