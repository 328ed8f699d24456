#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pcm/cluster.hpp"
#include "pcm/matrix.hpp"
#include "pcm/potential.hpp"

namespace pcm {

struct KMeansConfig {
  std::size_t k = 2;
  std::size_t restarts = 100;
  std::size_t max_iters = 300;
  std::uint64_t seed = 0;
};

struct LloydRun {
  ClusterAssignment assignment;
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // after each assignment step
  std::size_t iterations = 0;
};

/// One Lloyd run. Initial centres are k distinct points drawn uniformly with
/// SplitMix64(seed); an emptied cluster is re-seeded with the point farthest
/// from its current centre. Squared Euclidean cost.
LloydRun lloyd(const Matrix& data, std::size_t k, std::size_t max_iters, std::uint64_t seed);

struct KMeansResult {
  ClusterAssignment assignment;
  double inertia = 0.0;
  std::vector<double> inertia_per_restart;
  std::size_t best_restart = 0;
};

// Best of `restarts` Lloyd runs (seed + r), ordered by (inertia, r).
KMeansResult kmeans(const Matrix& data, const KMeansConfig& config);

struct SpectralEmbedding {
  Matrix rows;                       // N x k, unit rows (zero rows left zero)
  std::vector<double> eigenvalues;   // full ascending spectrum of L
  std::size_t k = 0;
};

// Eigenvectors of the k smallest eigenvalues of L(x) at the data. k comes
// from eigen_gap_count when absent.
SpectralEmbedding spectral_embedding(const Matrix& data, const PotentialSpec& spec,
                                     std::optional<std::size_t> k = std::nullopt);

// k-means on a precomputed embedding; centers are reported in data space.
ClusterAssignment cluster_embedding(const SpectralEmbedding& embedding, const Matrix& data,
                                    std::uint64_t seed, std::size_t restarts = 1);

ClusterAssignment spectral_cluster(const Matrix& data, const PotentialSpec& spec,
                                   std::optional<std::size_t> k, std::uint64_t seed,
                                   std::size_t restarts = 1);

// Laplacian eigenvalues at the data (ascending), as used for eigen-gap plots.
std::vector<double> laplacian_spectrum(const Matrix& data, const PotentialSpec& spec);

// Mean of each cluster's points.
Matrix cluster_means(const Matrix& data, const std::vector<std::size_t>& labels,
                     std::size_t cluster_count);

}  // namespace pcm
