#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcm/datagen.hpp"
#include "pcm/pcm.hpp"
#include "pcm/potential.hpp"

namespace pcm {

// Rows are true classes, columns predicted clusters.
struct ConfusionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> counts;  // row-major
  std::vector<std::size_t> row_labels;
  std::vector<std::size_t> col_labels;

  std::size_t operator()(std::size_t r, std::size_t c) const noexcept { return counts[r * cols + c]; }
  std::size_t total() const noexcept;
  std::size_t diagonal_sum() const noexcept;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Labels are used as indices: rows 0..max(true), columns 0..max(predicted).
ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted);

struct SortedConfusion {
  ConfusionMatrix matrix;  // square, padded with zero rows/columns
  // Column r of the sorted matrix is column permutation[r] of the padded input.
  std::vector<std::size_t> permutation;
};

/// Column permutation maximising the diagonal sum (Hungarian method on the
/// zero-padded square matrix). Among optimal permutations the
/// lexicographically smallest is returned.
SortedConfusion diagonal_heavy_sort(const ConfusionMatrix& cm);

// Sum of off-diagonal entries.
std::size_t total_error(const ConfusionMatrix& sorted);

// Convenience: total_error(diagonal_heavy_sort(confusion_matrix(...))).
std::size_t clustering_error(std::span<const std::size_t> truth,
                             std::span<const std::size_t> predicted);

/// Unweighted mean over true classes of F1 against the matched cluster;
/// classes matched to a padding column score 0.
double macro_f1(std::span<const std::size_t> truth, std::span<const std::size_t> predicted);

struct AlgorithmSummary {
  std::string name;
  std::size_t runs = 0;
  std::size_t min_error = 0;
  double mean_error = 0.0;
  double sd_error = 0.0;
  double mean_f1 = 0.0;
  double sd_f1 = 0.0;
  double wall_time_seconds = 0.0;
  std::size_t cluster_count = 0;  // of the best run
  std::vector<std::size_t> errors;
  ConfusionMatrix best_confusion;  // diagonal-heavy sorted
};

struct BenchmarkOptions {
  PcmConfig pcm;
  // kmeans/spectral cluster count; the number of true classes when absent.
  std::optional<std::size_t> k;
  std::size_t kmeans_restarts = 1;  // per run
  std::size_t kmeans_max_iters = 300;
  // kernel for spectral; auto-tuned Gaussian when absent.
  std::optional<PotentialSpec> spectral_potential;
  bool parallel = false;  // run algorithms concurrently
};

struct BenchmarkReport {
  std::string dataset;
  std::string provenance;
  std::size_t points = 0;
  std::size_t dimension = 0;
  std::size_t classes = 0;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  std::vector<AlgorithmSummary> algorithms;  // in request order
};

// Known names: "pcm", "graph", "kmeans", "spectral".
const std::vector<std::string>& benchmark_algorithms();

/// Stochastic algorithms (kmeans, spectral) run `runs` times with seeds
/// seed + run; deterministic ones (pcm, graph) run once. Throws ArgumentError
/// for unknown names or unlabeled data.
BenchmarkReport run_benchmark(const LabeledDataset& dataset,
                              const std::vector<std::string>& algorithms, std::size_t runs,
                              std::uint64_t seed, const BenchmarkOptions& options = {});

// Mean and sample standard deviation (0 for fewer than two values).
double mean_of(std::span<const double> values);
double sample_sd(std::span<const double> values);

}  // namespace pcm
