#include <benchmark/benchmark.h>

#include "pcm/datagen.hpp"
#include "pcm/dynamics.hpp"
#include "pcm/eigen.hpp"
#include "pcm/eval.hpp"
#include "pcm/random.hpp"

namespace {

pcm::ParticleState uniform_state(std::size_t n, std::size_t dim) {
  pcm::SplitMix64 rng(77);
  pcm::Matrix pts(n, dim);
  for (double& v : pts.values()) v = rng.uniform01() * 10.0;
  return pcm::ParticleState::from_points(std::move(pts));
}

void BM_ForceField(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const pcm::ParticleState s = uniform_state(n, 3);
  const pcm::PotentialSpec spec = pcm::PotentialSpec::gaussian(1.0);
  for (auto _ : st) benchmark::DoNotOptimize(pcm::force_field(s, spec));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ForceField)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);

void BM_EulerStep(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  pcm::ParticleState s = uniform_state(n, 3);
  const pcm::PotentialSpec spec = pcm::PotentialSpec::gaussian(1.0);
  for (auto _ : st) {
    s = pcm::euler_step(s, spec, 0.01);
    benchmark::DoNotOptimize(s.positions.values().data());
  }
}
BENCHMARK(BM_EulerStep)->Arg(500)->Arg(1000);

void BM_PrunedForceField(benchmark::State& st) {
  const pcm::ParticleState s = uniform_state(2000, 3);
  const pcm::PotentialSpec spec = pcm::PotentialSpec::gaussian(1.0);
  const pcm::NeighborLists nl = pcm::build_neighbor_lists(s, 3.0);
  for (auto _ : st) benchmark::DoNotOptimize(pcm::force_field(s, spec, &nl));
}
BENCHMARK(BM_PrunedForceField);

void BM_DiagonalHeavySort(benchmark::State& st) {
  const auto k = static_cast<std::size_t>(st.range(0));
  pcm::SplitMix64 rng(5);
  pcm::ConfusionMatrix cm;
  cm.rows = cm.cols = k;
  for (std::size_t i = 0; i < k * k; ++i) cm.counts.push_back(rng.below(100));
  for (std::size_t i = 0; i < k; ++i) {
    cm.row_labels.push_back(i);
    cm.col_labels.push_back(i);
  }
  for (auto _ : st) benchmark::DoNotOptimize(pcm::diagonal_heavy_sort(cm));
}
BENCHMARK(BM_DiagonalHeavySort)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_SymmetricEigen(benchmark::State& st) {
  const pcm::LabeledDataset d = pcm::default_hypersphere_clusters(1);
  const pcm::ParticleState s = pcm::ParticleState::from_points(d.points);
  const pcm::LaplacianMatrix lap = pcm::build_laplacian(s, pcm::PotentialSpec::gaussian(0.5));
  for (auto _ : st) benchmark::DoNotOptimize(pcm::symmetric_eigen(lap.entries));
}
BENCHMARK(BM_SymmetricEigen)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
