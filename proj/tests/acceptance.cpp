// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pcm/baselines.hpp"
#include "pcm/datagen.hpp"
#include "pcm/dynamics.hpp"
#include "pcm/eigen.hpp"
#include "pcm/eval.hpp"
#include "pcm/graphdyn.hpp"
#include "pcm/pcm.hpp"
#include "pcm/random.hpp"
#include "pcm/serialize.hpp"

namespace {

using namespace pcm;
using Clock = std::chrono::steady_clock;

// Tolerances and limits.
constexpr std::size_t kIrisMaxError = 20;
constexpr double kIrisMaxSeconds = 10.0;
constexpr double kSpheresMaxSeconds = 30.0;
constexpr double kMixtureErrorFraction = 0.01;
constexpr double kGraphMaxDeviation = 1e-3;
constexpr double kGraphDt = 1e-3;
constexpr double kGraphHorizon = 1.0;
constexpr double kCentroidRelTol = 1e-9;
constexpr double kGradientRelTol = 1e-4;
constexpr double kRowSumTol = 1e-12;
constexpr std::size_t kInvariantInstances = 100;
constexpr std::size_t kKMeansIrisMaxError = 20;
constexpr std::size_t kBaselineRestarts = 100;
constexpr double kRatioLow = 3.0;
constexpr double kRatioHigh = 6.0;
constexpr std::size_t kStepReps = 21;
constexpr std::size_t kSortMatrices = 500;
constexpr std::size_t kSortMaxDim = 7;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data_path(const std::string& name) {
  return (std::filesystem::path(PCM_DATA_DIR) / name).string();
}

std::string str_matrix(const ConfusionMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < m.rows; ++r) {
    os << (r ? ",(" : "(");
    for (std::size_t c = 0; c < m.cols; ++c) os << (c ? "," : "") << m(r, c);
    os << ")";
  }
  os << "]";
  return os.str();
}

Outcome iris_reproduction() {
  LabeledDataset iris = load_csv(data_path("iris.csv"), std::string("species"));
  const auto t = Clock::now();
  PcmResult r = run_pcm(iris.points);
  const double secs = seconds_since(t);
  SortedConfusion s = diagonal_heavy_sort(confusion_matrix(*iris.labels, r.assignment.labels));
  const std::size_t err = total_error(s.matrix);
  const bool setosa = s.matrix(0, 0) == 50 && s.matrix(0, 1) == 0 && s.matrix(0, 2) == 0 &&
                      s.matrix(1, 0) == 0 && s.matrix(2, 0) == 0;
  std::ostringstream os;
  os << "clusters=" << r.assignment.cluster_count() << " error=" << err << " confusion="
     << str_matrix(s.matrix) << " time=" << secs << "s";
  return {r.assignment.cluster_count() == 3 && err <= kIrisMaxError && setosa &&
              secs < kIrisMaxSeconds,
          os.str()};
}

Outcome hyperspheres() {
  LabeledDataset d = default_hypersphere_clusters(1);
  const auto t = Clock::now();
  PcmResult r = run_pcm(d.points);
  const double secs = seconds_since(t);
  const std::size_t err = clustering_error(*d.labels, r.assignment.labels);
  std::ostringstream os;
  os << "clusters=" << r.assignment.cluster_count() << " error=" << err << " time=" << secs << "s";
  return {err == 0 && secs < kSpheresMaxSeconds, os.str()};
}

Outcome mixture() {
  bool ok = true;
  std::ostringstream os;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    LabeledDataset d = gen_gaussian_mixture(default_mixture_components(), seed);
    PcmResult r = run_pcm(d.points);
    const std::size_t err = clustering_error(*d.labels, r.assignment.labels);
    const double limit = kMixtureErrorFraction * static_cast<double>(d.size());
    ok = ok && r.assignment.cluster_count() == 4 && static_cast<double>(err) <= limit;
    os << "seed" << seed << ": clusters=" << r.assignment.cluster_count() << " error=" << err
       << " ";
  }
  return {ok, os.str()};
}

std::string slurp(const std::filesystem::path& p) {
  try {
    return read_text_file(p);
  } catch (const std::exception&) {
    return {};
  }
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "pcm_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = dir / "run_a.json";
  const auto b = dir / "run_b.json";
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  const std::string base = std::string("\"") + PCM_TOOL_PATH + "\" cluster \"" +
                           data_path("iris.csv") + "\" --label-col species --output ";
  const int rc_a = std::system((base + "\"" + a.string() + "\"").c_str());
  const int rc_b = std::system((base + "\"" + b.string() + "\"").c_str());
  const std::string sa = slurp(a);
  const std::string sb = slurp(b);
  const bool files_equal = rc_a == 0 && rc_b == 0 && !sa.empty() && sa == sb;

  LabeledDataset iris = load_csv(data_path("iris.csv"), std::string("species"));
  const std::string first = to_json(run_pcm(iris.points)).dump();
  bool in_process_equal = true;
  for (int i = 0; i < 2; ++i) in_process_equal = in_process_equal && to_json(run_pcm(iris.points)).dump() == first;

  BenchmarkReport rep = run_benchmark(iris, {"pcm"}, 10, 0);
  const double sd = rep.algorithms.front().sd_error;
  std::ostringstream os;
  os << "cli files identical=" << (files_equal ? "yes" : "no") << " (" << sa.size()
     << " bytes), repeated run_pcm identical=" << (in_process_equal ? "yes" : "no")
     << ", benchmark pcm sd_error=" << sd;
  return {files_equal && in_process_equal && sd == 0.0, os.str()};
}

Outcome eigen_gap() {
  LabeledDataset d = default_four_blobs(1);
  const PotentialSpec spec = PotentialSpec::gaussian(auto_tune_sigma(d.points));
  const std::vector<double> values = laplacian_spectrum(d.points, spec);
  const std::size_t gap = eigen_gap_count(values);
  std::ostringstream os;
  os << "sigma=" << spec.sigma << " eigen_gap_count=" << gap << " lambda4=" << values[3]
     << " lambda5=" << values[4];
  return {gap == 4, os.str()};
}

Outcome graph_equivalence() {
  SplitMix64 rng(2024);
  Matrix pts(20, 2);
  for (double& v : pts.values()) v = rng.uniform01();
  const double sigma = auto_tune_sigma(pts);
  const PotentialSpec untruncated = PotentialSpec::gaussian(sigma, INFINITY);
  const auto steps = static_cast<std::size_t>(std::llround(kGraphHorizon / kGraphDt));

  ParticleState state = ParticleState::from_points(pts);
  DistanceMatrix d = DistanceMatrix::from_points(pts);
  double worst = 0.0;
  std::size_t clamps = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    state = euler_step(state, untruncated, kGraphDt);
    GraphEvolution g = evolve_distances(d, sigma, kGraphDt, 1, std::numeric_limits<double>::min());
    clamps += g.clamp_events;
    d = g.distances;
    const Matrix embedded = pairwise_distances(state.positions);
    for (std::size_t i = 0; i < embedded.rows(); ++i)
      for (std::size_t j = 0; j < embedded.cols(); ++j)
        worst = std::max(worst, std::abs(embedded(i, j) - d(i, j)));
  }
  std::ostringstream os;
  os << "N=20 M=2 sigma=" << sigma << " steps=" << steps << " max deviation=" << worst
     << " clamps=" << clamps;
  return {worst <= kGraphMaxDeviation && clamps == 0, os.str()};
}

Matrix random_points(SplitMix64& rng, std::size_t n, std::size_t m, double scale) {
  Matrix p(n, m);
  for (double& v : p.values()) v = scale * rng.normal();
  return p;
}

Outcome invariants() {
  std::size_t centroid_fail = 0, lyap_fail = 0, grad_fail = 0, rows_fail = 0, kernel_fail = 0;
  double worst_centroid = 0.0, worst_grad = 0.0, worst_row = 0.0;
  for (std::size_t inst = 0; inst < kInvariantInstances; ++inst) {
    SplitMix64 rng(1000 + inst);
    const std::size_t n = 5 + rng.below(20);
    const std::size_t m = 1 + rng.below(4);
    const double sigma = 0.5 + rng.uniform01();
    const PotentialSpec spec = rng.below(2) ? PotentialSpec::gaussian(sigma)
                                            : PotentialSpec::quartic(3.0 * sigma);

    // Centroid conservation for one step, with random masses.
    ParticleState st = ParticleState::from_points(random_points(rng, n, m, 2.0 * sigma));
    for (double& w : st.masses) w = 1.0 + static_cast<double>(rng.below(3));
    const double dt = std::min(1.0, 0.9 * stability_max_dt(st, spec));
    const std::vector<double> c0 = centroid(st);
    const ParticleState next = euler_step(st, spec, dt);
    const std::vector<double> c1 = centroid(next);
    double spread = 0.0;
    for (double v : st.positions.values()) spread = std::max(spread, std::abs(v));
    for (std::size_t k = 0; k < m; ++k) {
      const double rel = std::abs(c1[k] - c0[k]) / std::max(1.0, spread);
      worst_centroid = std::max(worst_centroid, rel);
      if (rel > kCentroidRelTol) ++centroid_fail;
    }

    // Lyapunov descent on a single cluster well inside the cutoff.
    ParticleState tight =
        ParticleState::from_points(random_points(rng, n, m, spec.r_star / (8.0 * std::sqrt(m + 0.0))));
    std::vector<std::size_t> members(n);
    std::iota(members.begin(), members.end(), 0);
    double v_prev = lyapunov_value(tight, members);
    const double tdt = 0.9 * stability_max_dt(tight, spec);
    for (int s = 0; s < 20; ++s) {
      tight = euler_step(tight, spec, tdt);
      const double v = lyapunov_value(tight, members);
      if (v > v_prev * (1.0 + 1e-12) + 1e-300) {
        ++lyap_fail;
        break;
      }
      v_prev = v;
    }

    // Force vs central finite differences of the total potential.
    ParticleState g = ParticleState::from_points(random_points(rng, n, m, sigma));
    bool near_cutoff = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(distance(g.positions.row(i), g.positions.row(j)) - spec.r_star) < 0.05 * spec.r_star)
          near_cutoff = true;
    if (!near_cutoff) {
      const Matrix f = force_field(g, spec);
      const double c = gradient_scale(spec);
      const double h = 1e-6 * spec.r_star;
      double fmax = 0.0, diff = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t a = 0; a < m; ++a) {
          ParticleState plus = g, minus = g;
          plus.positions(k, a) += h;
          minus.positions(k, a) -= h;
          const double grad = (total_potential(plus, spec) - total_potential(minus, spec)) / (2 * h);
          const double fd = -grad / (2.0 * c * g.masses[k]);
          diff = std::max(diff, std::abs(fd - f(k, a)));
          fmax = std::max(fmax, std::abs(f(k, a)));
        }
      }
      const double rel = diff / std::max(fmax, 1e-12);
      worst_grad = std::max(worst_grad, rel);
      if (rel > kGradientRelTol) ++grad_fail;
    }

    // Laplacian row sums.
    const LaplacianMatrix lap = build_laplacian(st, spec);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0, mag = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        sum += lap.entries(i, j);
        mag = std::max(mag, std::abs(lap.entries(i, j)));
      }
      const double rel = std::abs(sum) / std::max(1.0, mag);
      worst_row = std::max(worst_row, rel);
      if (rel > kRowSumTol) ++rows_fail;
    }

    // Kernel: bounded in [0, 1], zero past the cutoff, nonincreasing in r.
    double prev = phi(0.0, spec);
    bool kernel_ok = prev == 1.0;
    for (int s = 1; s <= 400; ++s) {
      const double r = spec.r_star * 1.5 * s / 400.0;
      const double w = phi(r, spec);
      if (w < 0.0 || w > 1.0 || w > prev) kernel_ok = false;
      if (r >= spec.r_star && (w != 0.0 || potential_value(r, spec) != 0.0)) kernel_ok = false;
      if (potential_value(r, spec) > 0.0) kernel_ok = false;
      prev = w;
    }
    if (!kernel_ok) ++kernel_fail;
  }
  std::ostringstream os;
  os << "instances=" << kInvariantInstances << " failures: centroid=" << centroid_fail
     << " lyapunov=" << lyap_fail << " gradient=" << grad_fail << " rowsum=" << rows_fail
     << " kernel=" << kernel_fail << "; worst centroid=" << worst_centroid
     << " gradient=" << worst_grad << " rowsum=" << worst_row;
  return {centroid_fail + lyap_fail + grad_fail + rows_fail + kernel_fail == 0, os.str()};
}

std::vector<std::size_t> class_members(const LabeledDataset& d, std::size_t cls) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.size(); ++i)
    if ((*d.labels)[i] == cls) idx.push_back(i);
  return idx;
}

Outcome baselines() {
  LabeledDataset iris = load_csv(data_path("iris.csv"), std::string("species"));
  BenchmarkReport km = run_benchmark(iris, {"kmeans"}, kBaselineRestarts, 0);
  const std::size_t km_min = km.algorithms.front().min_error;

  LabeledDataset conc = default_concentric_spheres(1);
  BenchmarkReport sp = run_benchmark(conc, {"spectral"}, kBaselineRestarts, 0);
  const std::size_t sp_min = sp.algorithms.front().min_error;

  PcmResult r = run_pcm(conc.points);
  const auto inner = class_members(conc, 0);
  const auto outer = class_members(conc, 1);
  std::vector<std::size_t> inner_ids, outer_ids;
  for (auto i : inner) inner_ids.push_back(r.assignment.labels[i]);
  for (auto i : outer) outer_ids.push_back(r.assignment.labels[i]);
  std::sort(inner_ids.begin(), inner_ids.end());
  std::sort(outer_ids.begin(), outer_ids.end());
  const auto inner_distinct = std::unique(inner_ids.begin(), inner_ids.end()) - inner_ids.begin();
  const auto outer_distinct = std::unique(outer_ids.begin(), outer_ids.end()) - outer_ids.begin();

  std::ostringstream os;
  os << "kmeans iris min error=" << km_min << "; spectral concentric min error=" << sp_min
     << "; pcm concentric clusters=" << r.assignment.cluster_count()
     << " inner shell clusters=" << inner_distinct << " outer shell clusters=" << outer_distinct;
  return {km_min <= kKMeansIrisMaxError && sp_min == 0 && inner_distinct == 1 && outer_distinct >= 2,
          os.str()};
}

double process_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

PcmSolver step_fixture(std::size_t n) {
  SplitMix64 rng(77);
  Matrix pts(n, 3);
  for (double& v : pts.values()) v = rng.uniform01() * 10.0;
  PcmConfig cfg;
  cfg.potential = PotentialSpec::gaussian(1.0);
  PcmSolver solver(pts, cfg);
  solver.step();
  return solver;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// CPU time per step, alternating sizes so machine load drifts affect both equally.
Outcome complexity() {
  PcmSolver small = step_fixture(1000);
  PcmSolver large = step_fixture(2000);
  std::vector<double> t1, t2;
  for (std::size_t i = 0; i < kStepReps; ++i) {
    double t = process_cpu_seconds();
    small.step();
    t1.push_back(process_cpu_seconds() - t);
    t = process_cpu_seconds();
    large.step();
    t2.push_back(process_cpu_seconds() - t);
  }
  const double m1 = median(t1);
  const double m2 = median(t2);
  const double ratio = m2 / m1;
  std::ostringstream os;
  os << "median step cpu time N=1000: " << m1 * 1e3 << " ms, N=2000: " << m2 * 1e3
     << " ms, ratio=" << ratio;
  return {ratio >= kRatioLow && ratio <= kRatioHigh, os.str()};
}

Outcome diagonal_sort() {
  SplitMix64 rng(99);
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < kSortMatrices; ++t) {
    const std::size_t rows = 1 + rng.below(kSortMaxDim);
    const std::size_t cols = 1 + rng.below(kSortMaxDim);
    ConfusionMatrix cm;
    cm.rows = rows;
    cm.cols = cols;
    for (std::size_t i = 0; i < rows * cols; ++i) cm.counts.push_back(rng.below(20));
    for (std::size_t i = 0; i < rows; ++i) cm.row_labels.push_back(i);
    for (std::size_t i = 0; i < cols; ++i) cm.col_labels.push_back(i);
    const std::size_t n = std::max(rows, cols);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
      std::size_t s = 0;
      for (std::size_t r = 0; r < rows; ++r)
        if (perm[r] < cols) s += cm(r, perm[r]);
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (diagonal_heavy_sort(cm).matrix.diagonal_sum() != best) ++mismatches;
  }
  std::ostringstream os;
  os << kSortMatrices << " matrices up to " << kSortMaxDim << "x" << kSortMaxDim
     << ", mismatches=" << mismatches;
  return {mismatches == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"iris reproduction", iris_reproduction},
      {"hyper-spherical fixture", hyperspheres},
      {"gaussian mixture fixture", mixture},
      {"determinism", determinism},
      {"four-blob eigen gap", eigen_gap},
      {"graph/euclidean equivalence", graph_equivalence},
      {"invariant suite", invariants},
      {"baseline sanity", baselines},
      {"per-iteration complexity", complexity},
      {"diagonal-heavy sort vs brute force", diagonal_sort},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
