#include "pcm/graphdyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "merge_detail.hpp"
#include "pcm/eigen.hpp"
#include "pcm/error.hpp"
#include "pcm/pcm.hpp"
#include "pcm/potential.hpp"

namespace pcm {

DistanceMatrix DistanceMatrix::from_points(const Matrix& points) {
  return DistanceMatrix{pairwise_distances(points)};
}

void DistanceMatrix::validate() const {
  const std::size_t n = entries.rows();
  if (n == 0 || entries.cols() != n) throw ArgumentError("distance matrix must be square and nonempty");
  if (!entries.all_finite()) throw NumericError("distance matrix has non-finite entries");
  double scale = 0.0;
  for (double v : entries.values()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, scale);
  for (std::size_t i = 0; i < n; ++i) {
    if (entries(i, i) != 0.0)
      throw ArgumentError("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      if (entries(i, j) < 0.0)
        throw ArgumentError("distance matrix has a negative entry at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      if (j > i && std::abs(entries(i, j) - entries(j, i)) > tol)
        throw ArgumentError("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
    }
  }
}

Matrix distance_rhs(const DistanceMatrix& distances, double sigma) {
  distances.validate();
  if (!(sigma > 0.0)) throw ConfigError("distance_rhs: sigma must be positive");
  const std::size_t n = distances.size();
  const double inv_s2 = 1.0 / (sigma * sigma);
  Matrix d2(n, n), w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = distances(i, j);
      d2(i, j) = d * d;
      w(i, j) = std::exp(-d * d * inv_s2);
    }

  Matrix rate(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = distances(i, j);
      if (dij == 0.0) continue;
      // Cosines are clamped to [-1, 1]: once Euler steps leave the matrix
      // slightly non-metric, the raw ratio is unbounded as d_ij -> 0.
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double dik = distances(i, k);
        const double djk = distances(j, k);
        if (dik != 0.0) {
          const double c = std::clamp((d2(j, k) - d2(i, j) - d2(i, k)) / (2.0 * dij * dik), -1.0, 1.0);
          s += w(i, k) * dik * c;
        }
        if (djk != 0.0) {
          const double c = std::clamp((d2(i, k) - d2(i, j) - d2(j, k)) / (2.0 * dij * djk), -1.0, 1.0);
          s += w(j, k) * djk * c;
        }
      }
      rate(i, j) = s;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) rate(j, i) = rate(i, j);
  return rate;
}

double graph_stability_max_dt(const DistanceMatrix& distances, double sigma) {
  const std::size_t n = distances.size();
  double max_weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) s += std::exp(-distances(i, k) * distances(i, k) / (sigma * sigma));
    max_weight = std::max(max_weight, s);
  }
  if (max_weight == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / max_weight;
}

GraphEvolution evolve_distances(const DistanceMatrix& initial, double sigma, double dt,
                                std::size_t max_iters, double stop_tol) {
  initial.validate();
  if (!(dt > 0.0)) throw ConfigError("evolve_distances: dt must be positive");
  if (!(stop_tol > 0.0)) throw ConfigError("evolve_distances: stop_tol must be positive");
  GraphEvolution out{initial};
  const std::size_t n = initial.size();
  auto& d = out.distances.entries;
  while (out.iterations < max_iters) {
    const Matrix rate = distance_rhs(out.distances, sigma);
    ++out.iterations;
    double total_change = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double next = d(i, j) + dt * rate(i, j);
        if (!std::isfinite(next)) {
          std::ostringstream os;
          os << "evolve_distances: non-finite distance at (" << i << ", " << j << ") in iteration "
             << out.iterations;
          throw NumericError(os.str());
        }
        if (next < 0.0) {
          next = 0.0;
          ++out.clamp_events;
        }
        total_change += std::abs(next - d(i, j));
        d(i, j) = next;
        d(j, i) = next;
      }
    const double pairs = n > 1 ? 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) : 1.0;
    if (total_change / pairs < stop_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ClusterAssignment extract_graph_clusters(const DistanceMatrix& distances, double threshold) {
  const std::size_t n = distances.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distances(i, j) < threshold) uf.unite(i, j);
  return canonical_assignment(uf.component_labels());
}

ClusterAssignment merge_small_graph_clusters(const ClusterAssignment& assignment,
                                             const DistanceMatrix& distances,
                                             std::size_t min_size) {
  if (assignment.labels.size() != distances.size())
    throw ArgumentError("merge_small_graph_clusters: assignment and matrix sizes differ");
  const std::vector<double> mass(distances.size(), 1.0);
  return canonical_assignment(detail::merge_labels(
      assignment.labels, mass, min_size,
      [&](std::size_t i, std::size_t j) { return distances(i, j); }));
}

bool is_euclidean_embeddable(const DistanceMatrix& distances, double tolerance) {
  const std::size_t n = distances.size();
  if (n <= 2) return true;
  Matrix d2(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d2(i, j) = distances(i, j) * distances(i, j);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += d2(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      gram(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + grand);
  const auto eig = symmetric_eigen(gram);
  double largest = 0.0;
  for (double v : eig.eigenvalues) largest = std::max(largest, std::abs(v));
  return eig.eigenvalues.front() >= -tolerance * std::max(largest, 1e-300);
}

GraphClusterResult run_graph_clustering(const DistanceMatrix& distances,
                                        const GraphClusterConfig& config) {
  distances.validate();
  if (config.max_iters < 1) throw ConfigError("graph: max_iters must be at least 1");
  if (!(config.stop_tol > 0.0)) throw ConfigError("graph: stop_tol must be positive");
  if (!(config.min_cluster_fraction >= 0.0 && config.min_cluster_fraction < 1.0))
    throw ConfigError("graph: min_cluster_fraction must lie in [0, 1)");
  if (config.dt && !(*config.dt > 0.0)) throw ConfigError("graph: dt must be positive");
  if (config.threshold && !(*config.threshold > 0.0))
    throw ConfigError("graph: threshold must be positive");

  GraphClusterResult r;
  const std::size_t n = distances.size();
  if (config.sigma) {
    if (!(*config.sigma > 0.0)) throw ConfigError("graph: sigma must be positive");
    r.sigma = *config.sigma;
  } else {
    r.sigma = n >= 2 ? auto_tune_sigma_from_distances(distances.entries, config.dimension) : 1.0;
  }
  r.threshold = config.threshold.value_or(3.0 * r.sigma);
  if (!is_euclidean_embeddable(distances))
    r.warnings.push_back(
        "distance matrix is not Euclidean-embeddable; the equivalence with the particle flow "
        "does not apply");

  constexpr std::size_t refresh = 50;
  GraphEvolution total{distances};
  while (total.iterations < config.max_iters && !total.converged) {
    double dt = 0.0;
    if (config.dt) {
      dt = *config.dt;
    } else {
      const double bound = graph_stability_max_dt(total.distances, r.sigma);
      dt = std::isfinite(bound) ? std::min(1.0, 0.5 * bound) : 1.0;
    }
    r.dt = dt;
    const std::size_t chunk = std::min(refresh, config.max_iters - total.iterations);
    GraphEvolution part = evolve_distances(total.distances, r.sigma, dt, chunk, config.stop_tol);
    total.distances = std::move(part.distances);
    total.iterations += part.iterations;
    total.clamp_events += part.clamp_events;
    total.converged = part.converged;
  }
  if (!total.converged) {
    std::ostringstream os;
    os << "graph evolution did not converge within max_iters=" << config.max_iters;
    r.warnings.push_back(os.str());
  }
  if (total.clamp_events > 0)
    r.warnings.push_back(std::to_string(total.clamp_events) + " distance entries clamped at zero");

  const ClusterAssignment raw = extract_graph_clusters(total.distances, r.threshold);
  r.assignment = merge_small_graph_clusters(raw, total.distances,
                                            min_cluster_size(config.min_cluster_fraction, n));
  r.evolution = std::move(total);
  return r;
}

}  // namespace pcm
