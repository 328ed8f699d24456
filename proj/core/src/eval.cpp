#include "pcm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "pcm/baselines.hpp"
#include "pcm/error.hpp"
#include "pcm/graphdyn.hpp"

namespace pcm {

std::size_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::diagonal_sum() const noexcept {
  std::size_t s = 0;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) s += (*this)(i, i);
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth,
                                 std::span<const std::size_t> predicted) {
  if (truth.size() != predicted.size())
    throw ArgumentError("confusion_matrix: label vectors differ in length (" +
                        std::to_string(truth.size()) + " vs " + std::to_string(predicted.size()) + ")");
  if (truth.empty()) throw ArgumentError("confusion_matrix: no labels");
  ConfusionMatrix cm;
  cm.rows = *std::max_element(truth.begin(), truth.end()) + 1;
  cm.cols = *std::max_element(predicted.begin(), predicted.end()) + 1;
  cm.counts.assign(cm.rows * cm.cols, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[truth[i] * cm.cols + predicted[i]];
  cm.row_labels.resize(cm.rows);
  cm.col_labels.resize(cm.cols);
  std::iota(cm.row_labels.begin(), cm.row_labels.end(), std::size_t{0});
  std::iota(cm.col_labels.begin(), cm.col_labels.end(), std::size_t{0});
  return cm;
}

namespace {

using Weights = std::vector<std::vector<long long>>;

// Maximum-weight perfect matching on a square matrix (Hungarian method with
// potentials, run on negated weights). Returns the column of each row.
std::vector<std::size_t> hungarian_max(const Weights& w) {
  const std::size_t n = w.size();
  if (n == 0) return {};
  constexpr long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      long long delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
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
  std::vector<std::size_t> col_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

long long matching_value(const Weights& w, const std::vector<std::size_t>& cols) {
  long long s = 0;
  for (std::size_t r = 0; r < cols.size(); ++r) s += w[r][cols[r]];
  return s;
}

// Best value over the rows from `first` on, restricted to unused columns.
long long restricted_optimum(const Weights& w, std::size_t first, const std::vector<bool>& used) {
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < w.size(); ++c)
    if (!used[c]) free_cols.push_back(c);
  const std::size_t m = free_cols.size();
  Weights sub(m, std::vector<long long>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) sub[r][c] = w[first + r][free_cols[c]];
  return matching_value(sub, hungarian_max(sub));
}

// Sizes above this skip the lexicographic refinement, which costs O(n^5).
constexpr std::size_t kLexicographicLimit = 32;

}  // namespace

SortedConfusion diagonal_heavy_sort(const ConfusionMatrix& cm) {
  const std::size_t n = std::max(cm.rows, cm.cols);
  Weights w(n, std::vector<long long>(n, 0));
  for (std::size_t r = 0; r < cm.rows; ++r)
    for (std::size_t c = 0; c < cm.cols; ++c) w[r][c] = static_cast<long long>(cm(r, c));

  std::vector<std::size_t> perm = hungarian_max(w);
  if (n <= kLexicographicLimit) {
    const long long best = matching_value(w, perm);
    std::vector<bool> used(n, false);
    long long prefix = 0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        used[c] = true;
        const long long rest = r + 1 < n ? restricted_optimum(w, r + 1, used) : 0;
        if (prefix + w[r][c] + rest == best) {
          perm[r] = c;
          prefix += w[r][c];
          break;
        }
        used[c] = false;
      }
    }
  }

  SortedConfusion out;
  out.permutation = perm;
  auto& m = out.matrix;
  m.rows = n;
  m.cols = n;
  m.counts.assign(n * n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.counts[r * n + c] = static_cast<std::size_t>(w[r][perm[c]]);
  m.row_labels.resize(n);
  std::iota(m.row_labels.begin(), m.row_labels.end(), std::size_t{0});
  m.col_labels = perm;
  return out;
}

std::size_t total_error(const ConfusionMatrix& sorted) { return sorted.total() - sorted.diagonal_sum(); }

std::size_t clustering_error(std::span<const std::size_t> truth,
                             std::span<const std::size_t> predicted) {
  return total_error(diagonal_heavy_sort(confusion_matrix(truth, predicted)).matrix);
}

double macro_f1(std::span<const std::size_t> truth, std::span<const std::size_t> predicted) {
  const ConfusionMatrix cm = confusion_matrix(truth, predicted);
  const SortedConfusion sorted = diagonal_heavy_sort(cm);
  std::vector<std::size_t> row_sum(cm.rows, 0), col_sum(cm.cols, 0);
  for (std::size_t r = 0; r < cm.rows; ++r)
    for (std::size_t c = 0; c < cm.cols; ++c) {
      row_sum[r] += cm(r, c);
      col_sum[c] += cm(r, c);
    }
  double total = 0.0;
  std::size_t classes = 0;
  for (std::size_t r = 0; r < cm.rows; ++r) {
    if (row_sum[r] == 0) continue;
    ++classes;
    const std::size_t c = sorted.permutation[r];
    if (c >= cm.cols) continue;
    const double tp = static_cast<double>(cm(r, c));
    if (tp == 0.0) continue;
    const double precision = tp / static_cast<double>(col_sum[c]);
    const double recall = tp / static_cast<double>(row_sum[r]);
    total += 2.0 * precision * recall / (precision + recall);
  }
  return classes == 0 ? 0.0 : total / static_cast<double>(classes);
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

const std::vector<std::string>& benchmark_algorithms() {
  static const std::vector<std::string> names{"pcm", "graph", "kmeans", "spectral"};
  return names;
}

namespace {

struct RunOutcome {
  std::vector<std::size_t> labels;
  std::size_t clusters = 0;
};

AlgorithmSummary summarize(const std::string& name, const std::vector<RunOutcome>& outcomes,
                           std::span<const std::size_t> truth, double seconds) {
  AlgorithmSummary s;
  s.name = name;
  s.runs = outcomes.size();
  s.wall_time_seconds = seconds;
  std::vector<double> errors, f1s;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::size_t e = clustering_error(truth, outcomes[i].labels);
    s.errors.push_back(e);
    errors.push_back(static_cast<double>(e));
    f1s.push_back(macro_f1(truth, outcomes[i].labels));
    if (e < s.errors[best]) best = i;
  }
  s.min_error = s.errors[best];
  s.mean_error = mean_of(errors);
  s.sd_error = sample_sd(errors);
  s.mean_f1 = mean_of(f1s);
  s.sd_f1 = sample_sd(f1s);
  s.cluster_count = outcomes[best].clusters;
  s.best_confusion = diagonal_heavy_sort(confusion_matrix(truth, outcomes[best].labels)).matrix;
  return s;
}

AlgorithmSummary run_one(const std::string& name, const LabeledDataset& dataset, std::size_t runs,
                         std::uint64_t seed, const BenchmarkOptions& options) {
  const auto& truth = *dataset.labels;
  const std::size_t k = options.k.value_or(dataset.class_count());
  const auto start = std::chrono::steady_clock::now();
  std::vector<RunOutcome> outcomes;
  if (name == "pcm") {
    const PcmResult r = run_pcm(dataset.points, options.pcm);
    outcomes.push_back({r.assignment.labels, r.assignment.cluster_count()});
  } else if (name == "graph") {
    GraphClusterConfig cfg;
    cfg.dimension = dataset.dim();
    cfg.min_cluster_fraction = options.pcm.min_cluster_fraction;
    if (options.pcm.potential) cfg.sigma = options.pcm.potential->sigma;
    const GraphClusterResult r = run_graph_clustering(DistanceMatrix::from_points(dataset.points), cfg);
    outcomes.push_back({r.assignment.labels, r.assignment.cluster_count()});
  } else if (name == "kmeans") {
    for (std::size_t run = 0; run < runs; ++run) {
      KMeansConfig cfg;
      cfg.k = k;
      cfg.restarts = options.kmeans_restarts;
      cfg.max_iters = options.kmeans_max_iters;
      cfg.seed = seed + run;
      const KMeansResult r = kmeans(dataset.points, cfg);
      outcomes.push_back({r.assignment.labels, r.assignment.cluster_count()});
    }
  } else if (name == "spectral") {
    const PotentialSpec spec =
        options.spectral_potential.value_or(PotentialSpec::gaussian(auto_tune_sigma(dataset.points)));
    const SpectralEmbedding emb = spectral_embedding(dataset.points, spec, k);
    for (std::size_t run = 0; run < runs; ++run) {
      const ClusterAssignment a = cluster_embedding(emb, dataset.points, seed + run, options.kmeans_restarts);
      outcomes.push_back({a.labels, a.cluster_count()});
    }
  } else {
    throw ArgumentError("unknown algorithm '" + name + "' (expected pcm, graph, kmeans or spectral)");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summarize(name, outcomes, truth, seconds);
}

}  // namespace

BenchmarkReport run_benchmark(const LabeledDataset& dataset,
                              const std::vector<std::string>& algorithms, std::size_t runs,
                              std::uint64_t seed, const BenchmarkOptions& options) {
  if (!dataset.labels) throw ArgumentError("run_benchmark: dataset has no ground-truth labels");
  if (runs < 1) throw ArgumentError("run_benchmark: runs must be at least 1");
  for (const auto& name : algorithms)
    if (std::find(benchmark_algorithms().begin(), benchmark_algorithms().end(), name) ==
        benchmark_algorithms().end())
      throw ArgumentError("unknown algorithm '" + name + "' (expected pcm, graph, kmeans or spectral)");

  BenchmarkReport report;
  report.dataset = dataset.name;
  report.provenance = dataset.provenance;
  report.points = dataset.size();
  report.dimension = dataset.dim();
  report.classes = dataset.class_count();
  report.runs = runs;
  report.seed = seed;

  if (options.parallel) {
    std::vector<std::future<AlgorithmSummary>> jobs;
    for (const auto& name : algorithms)
      jobs.push_back(std::async(std::launch::async, run_one, name, std::cref(dataset), runs, seed,
                                std::cref(options)));
    for (auto& j : jobs) report.algorithms.push_back(j.get());
  } else {
    for (const auto& name : algorithms)
      report.algorithms.push_back(run_one(name, dataset, runs, seed, options));
  }
  return report;
}

}  // namespace pcm
