#include "pcm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pcm/dynamics.hpp"
#include "pcm/eigen.hpp"
#include "pcm/error.hpp"
#include "pcm/random.hpp"

namespace pcm {

namespace {

double assign_points(const Matrix& data, const Matrix& centers, std::vector<std::size_t>& labels,
                     std::vector<double>& cost) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(data.row(i), centers.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    cost[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

}  // namespace

Matrix cluster_means(const Matrix& data, const std::vector<std::size_t>& labels,
                     std::size_t cluster_count) {
  Matrix means(cluster_count, data.cols());
  std::vector<std::size_t> count(cluster_count, 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    ++count[labels[i]];
    for (std::size_t d = 0; d < data.cols(); ++d) means(labels[i], d) += data(i, d);
  }
  for (std::size_t c = 0; c < cluster_count; ++c)
    if (count[c] > 0)
      for (std::size_t d = 0; d < data.cols(); ++d) means(c, d) /= static_cast<double>(count[c]);
  return means;
}

LloydRun lloyd(const Matrix& data, std::size_t k, std::size_t max_iters, std::uint64_t seed) {
  const std::size_t n = data.rows();
  if (k < 1) throw ArgumentError("kmeans: k must be at least 1");
  if (k > n) throw ArgumentError("kmeans: k = " + std::to_string(k) + " exceeds the " +
                                 std::to_string(n) + " available points");
  if (max_iters < 1) throw ArgumentError("kmeans: max_iters must be at least 1");

  // k distinct indices by a partial Fisher-Yates shuffle.
  SplitMix64 rng(seed);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  Matrix centers(k, data.cols());
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t pick = c + static_cast<std::size_t>(rng.below(n - c));
    std::swap(pool[c], pool[pick]);
    for (std::size_t d = 0; d < data.cols(); ++d) centers(c, d) = data(pool[c], d);
  }

  LloydRun run;
  std::vector<std::size_t> labels(n, 0);
  std::vector<double> cost(n, 0.0);
  for (std::size_t it = 0; it < max_iters; ++it) {
    double inertia = assign_points(data, centers, labels, cost);

    std::vector<std::size_t> count(k, 0);
    for (std::size_t l : labels) ++count[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      // Empty cluster: take over the point currently farthest from its centre.
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (cost[i] > cost[far] && count[labels[i]] > 1) far = i;
      if (count[labels[far]] <= 1) continue;
      --count[labels[far]];
      inertia -= cost[far];
      labels[far] = c;
      cost[far] = 0.0;
      count[c] = 1;
      for (std::size_t d = 0; d < data.cols(); ++d) centers(c, d) = data(far, d);
    }
    run.inertia_trace.push_back(inertia);
    run.iterations = it + 1;

    const Matrix updated = cluster_means(data, labels, k);
    const bool moved = updated != centers;
    centers = updated;
    if (!moved) break;
  }
  run.inertia = assign_points(data, centers, labels, cost);

  ClusterAssignment a = canonical_assignment(labels);
  a.centers = cluster_means(data, a.labels, a.sizes.size());
  run.assignment = std::move(a);
  return run;
}

KMeansResult kmeans(const Matrix& data, const KMeansConfig& config) {
  if (config.restarts < 1) throw ArgumentError("kmeans: restarts must be at least 1");
  if (config.k > data.rows()) throw ArgumentError("kmeans: k exceeds the number of points");
  std::vector<LloydRun> runs(config.restarts);
  const auto count = static_cast<std::ptrdiff_t>(config.restarts);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < count; ++r)
    runs[static_cast<std::size_t>(r)] =
        lloyd(data, config.k, config.max_iters, config.seed + static_cast<std::uint64_t>(r));

  KMeansResult out;
  out.inertia_per_restart.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.inertia_per_restart.push_back(runs[r].inertia);
    if (runs[r].inertia < runs[out.best_restart].inertia) out.best_restart = r;
  }
  out.inertia = runs[out.best_restart].inertia;
  out.assignment = std::move(runs[out.best_restart].assignment);
  return out;
}

std::vector<double> laplacian_spectrum(const Matrix& data, const PotentialSpec& spec) {
  const auto lap = build_laplacian(ParticleState::from_points(data), spec);
  return symmetric_eigen(lap.entries).eigenvalues;
}

SpectralEmbedding spectral_embedding(const Matrix& data, const PotentialSpec& spec,
                                     std::optional<std::size_t> k) {
  const std::size_t n = data.rows();
  if (n < 2) throw ArgumentError("spectral_cluster: need at least two points");
  if (k && (*k < 1 || *k > n)) throw ArgumentError("spectral_cluster: k must lie in [1, N]");
  const auto lap = build_laplacian(ParticleState::from_points(data), spec);
  EigenDecomposition eig = symmetric_eigen(lap.entries);

  SpectralEmbedding emb;
  emb.k = k ? *k : eigen_gap_count(eig.eigenvalues);
  emb.rows = Matrix(n, emb.k);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t c = 0; c < emb.k; ++c) norm += eig.eigenvectors(i, c) * eig.eigenvectors(i, c);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t c = 0; c < emb.k; ++c) emb.rows(i, c) = eig.eigenvectors(i, c) / norm;
  }
  emb.eigenvalues = std::move(eig.eigenvalues);
  return emb;
}

ClusterAssignment cluster_embedding(const SpectralEmbedding& embedding, const Matrix& data,
                                    std::uint64_t seed, std::size_t restarts) {
  KMeansConfig cfg;
  cfg.k = embedding.k;
  cfg.restarts = restarts;
  cfg.seed = seed;
  ClusterAssignment a = kmeans(embedding.rows, cfg).assignment;
  a.centers = cluster_means(data, a.labels, a.sizes.size());
  return a;
}

ClusterAssignment spectral_cluster(const Matrix& data, const PotentialSpec& spec,
                                   std::optional<std::size_t> k, std::uint64_t seed,
                                   std::size_t restarts) {
  return cluster_embedding(spectral_embedding(data, spec, k), data, seed, restarts);
}

}  // namespace pcm
