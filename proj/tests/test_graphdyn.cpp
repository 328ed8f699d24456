#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "pcm/datagen.hpp"
#include "pcm/dynamics.hpp"
#include "pcm/error.hpp"
#include "pcm/eval.hpp"
#include "pcm/graphdyn.hpp"
#include "pcm/pcm.hpp"
#include "pcm/random.hpp"

using pcm::DistanceMatrix;
using pcm::Matrix;

namespace {

Matrix random_points(std::uint64_t seed, std::size_t n, std::size_t m) {
  pcm::SplitMix64 rng(seed);
  Matrix p(n, m);
  for (double& v : p.values()) v = rng.uniform01();
  return p;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace

TEST(DistanceRhs, TwoPoints) {
  DistanceMatrix d{Matrix{{0, 1}, {1, 0}}};
  Matrix r = pcm::distance_rhs(d, 1.0);
  EXPECT_NEAR(r(0, 1), -2.0 * std::exp(-1.0), 1e-15);
  EXPECT_EQ(r(0, 1), r(1, 0));
  EXPECT_EQ(r(0, 0), 0.0);
}

TEST(DistanceRhs, CollapsedIsFixed) {
  DistanceMatrix d{Matrix(4, 4, 0.0)};
  Matrix r = pcm::distance_rhs(d, 0.5);
  for (double v : r.values()) EXPECT_EQ(v, 0.0);
}

TEST(DistanceRhs, EquilateralSymmetry) {
  const double s = 0.7;
  DistanceMatrix d{Matrix{{0, s, s}, {s, 0, s}, {s, s, 0}}};
  Matrix r = pcm::distance_rhs(d, 1.0);
  EXPECT_DOUBLE_EQ(r(0, 1), r(0, 2));
  EXPECT_DOUBLE_EQ(r(0, 1), r(1, 2));
  EXPECT_LT(r(0, 1), 0.0);
}

TEST(DistanceRhs, CoincidentPairsStayFinite) {
  Matrix p{{0, 0}, {0, 0}, {1, 0}, {1, 0.5}};
  Matrix r = pcm::distance_rhs(DistanceMatrix::from_points(p), 0.8);
  EXPECT_TRUE(r.all_finite());
  EXPECT_EQ(pcm::asymmetry(r), 0.0);
}

// Against the analytic rate d/dt |x_i - x_j| computed from the embedded flow.
TEST(DistanceRhs, MatchesEmbeddedVelocity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix p = random_points(seed, 10, 3);
    const double sigma = 0.4;
    Matrix r = pcm::distance_rhs(DistanceMatrix::from_points(p), sigma);
    pcm::ParticleState s = pcm::ParticleState::from_points(p);
    Matrix v = pcm::force_field(s, pcm::PotentialSpec::gaussian(sigma, INFINITY));
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) {
        if (i == j) continue;
        double dot = 0.0;
        for (std::size_t a = 0; a < 3; ++a) dot += (p(i, a) - p(j, a)) * (v(i, a) - v(j, a));
        ASSERT_NEAR(r(i, j), dot / pcm::distance(p.row(i), p.row(j)), 1e-12);
      }
  }
}

TEST(Evolve, FarApartUnchanged) {
  Matrix p{{0, 0}, {50, 0}, {0, 50}};
  DistanceMatrix d = DistanceMatrix::from_points(p);
  pcm::GraphEvolution g = pcm::evolve_distances(d, 1.0, 0.1, 100, 1e-9);
  EXPECT_LE(max_abs_diff(g.distances.entries, d.entries), 1e-12);
  EXPECT_TRUE(g.converged);
}

TEST(Evolve, EuclideanEquivalence) {
  Matrix p = random_points(17, 20, 2);
  const double sigma = pcm::auto_tune_sigma(p);
  const double dt = 1e-3;
  pcm::ParticleState s = pcm::ParticleState::from_points(p);
  DistanceMatrix d = DistanceMatrix::from_points(p);
  double worst = 0.0;
  for (int step = 0; step < 1000; ++step) {
    s = pcm::euler_step(s, pcm::PotentialSpec::gaussian(sigma, INFINITY), dt);
    pcm::GraphEvolution g = pcm::evolve_distances(d, sigma, dt, 1, std::numeric_limits<double>::min());
    EXPECT_EQ(g.clamp_events, 0u);
    d = g.distances;
    worst = std::max(worst, max_abs_diff(d.entries, pcm::pairwise_distances(s.positions)));
  }
  EXPECT_LE(worst, 1e-3);
}

TEST(Evolve, TightGroupsCollapseCrossDistancesPersist) {
  pcm::SplitMix64 rng(8);
  Matrix p(20, 2);
  for (std::size_t i = 0; i < 20; ++i) {
    p(i, 0) = (i < 10 ? 0.0 : 10.0) + 0.05 * rng.normal();
    p(i, 1) = 0.05 * rng.normal();
  }
  DistanceMatrix d0 = DistanceMatrix::from_points(p);
  pcm::GraphEvolution g = pcm::evolve_distances(d0, 0.5, 0.05, 5000, 1e-12);
  pcm::ParticleState s = pcm::ParticleState::from_points(p);
  for (std::size_t step = 0; step < g.iterations; ++step)
    s = pcm::euler_step(s, pcm::PotentialSpec::gaussian(0.5, INFINITY), 0.05);
  const Matrix embedded = pcm::pairwise_distances(s.positions);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) {
      if ((i < 10) == (j < 10)) {
        EXPECT_LT(g.distances(i, j), 1e-6);
      } else {
        EXPECT_NEAR(g.distances(i, j), d0(i, j), 0.25);
        EXPECT_NEAR(g.distances(i, j), embedded(i, j), 1e-3);
      }
    }
}

TEST(Evolve, Errors) {
  DistanceMatrix d{Matrix{{0, 1}, {1, 0}}};
  EXPECT_THROW(pcm::evolve_distances(d, 1.0, 0.0, 10, 1e-5), pcm::ConfigError);
  EXPECT_THROW(pcm::distance_rhs(d, 0.0), pcm::ConfigError);
  EXPECT_THROW(pcm::evolve_distances(d, 1.0, 0.1, 10, 0.0), pcm::ConfigError);
  DistanceMatrix bad{Matrix{{0, INFINITY}, {INFINITY, 0}}};
  EXPECT_THROW(pcm::evolve_distances(bad, 1.0, 0.1, 10, 1e-5), pcm::NumericError);
}

TEST(DistanceMatrix, Validation) {
  EXPECT_THROW((DistanceMatrix{Matrix{{0, 1}, {2, 0}}}).validate(), pcm::ArgumentError);
  EXPECT_THROW((DistanceMatrix{Matrix{{1, 1}, {1, 0}}}).validate(), pcm::ArgumentError);
  EXPECT_THROW((DistanceMatrix{Matrix{{0, -1}, {-1, 0}}}).validate(), pcm::ArgumentError);
  EXPECT_THROW((DistanceMatrix{Matrix(2, 3)}).validate(), pcm::ArgumentError);
  EXPECT_THROW((DistanceMatrix{Matrix{{0, NAN}, {NAN, 0}}}).validate(), pcm::NumericError);
}

TEST(GraphClusters, Extraction) {
  DistanceMatrix far{Matrix{{0, 5, 5}, {5, 0, 5}, {5, 5, 0}}};
  EXPECT_EQ(pcm::extract_graph_clusters(far, 1.0).cluster_count(), 3u);
  DistanceMatrix blocks{Matrix{{0, 0.01, 9, 9}, {0.01, 0, 9, 9}, {9, 9, 0, 0}, {9, 9, 0, 0}}};
  pcm::ClusterAssignment a = pcm::extract_graph_clusters(blocks, 1.0);
  EXPECT_EQ(a.labels, (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_TRUE(a.centers.empty());
}

TEST(GraphClusters, MergeUsesMatrixDistances) {
  DistanceMatrix d{Matrix{{0, 0, 0, 3, 9}, {0, 0, 0, 3, 9}, {0, 0, 0, 3, 9}, {3, 3, 3, 0, 8}, {9, 9, 9, 8, 0}}};
  pcm::ClusterAssignment a = pcm::extract_graph_clusters(d, 1.0);
  pcm::ClusterAssignment m = pcm::merge_small_graph_clusters(a, d, 2);
  EXPECT_EQ(m.labels, (std::vector<std::size_t>{0, 0, 0, 0, 0}));
}

TEST(Embeddable, DetectsNonEuclidean) {
  EXPECT_TRUE(pcm::is_euclidean_embeddable(DistanceMatrix::from_points(random_points(3, 12, 3))));
  DistanceMatrix bad{Matrix{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}};
  EXPECT_FALSE(pcm::is_euclidean_embeddable(bad));
}

TEST(RunGraph, NonEuclideanInputWarns) {
  DistanceMatrix bad{Matrix{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}};
  pcm::GraphClusterConfig c;
  c.sigma = 1.0;
  pcm::GraphClusterResult r = pcm::run_graph_clustering(bad, c);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(RunGraph, FourBlobs) {
  pcm::LabeledDataset d = pcm::default_four_blobs(1);
  pcm::GraphClusterConfig c;
  c.dimension = 2;
  pcm::GraphClusterResult r = pcm::run_graph_clustering(DistanceMatrix::from_points(d.points), c);
  EXPECT_EQ(r.assignment.cluster_count(), 4u);
  EXPECT_EQ(pcm::clustering_error(*d.labels, r.assignment.labels), 0u);
  EXPECT_EQ(r.evolution.clamp_events, 0u);
  EXPECT_DOUBLE_EQ(r.threshold, 3.0 * r.sigma);
}

TEST(RunGraph, IrisMatchesEuclideanPartition) {
  pcm::LabeledDataset d =
      pcm::load_csv(std::filesystem::path(PCM_DATA_DIR) / "iris.csv", std::string("species"));
  pcm::GraphClusterConfig c;
  c.dimension = 4;
  pcm::GraphClusterResult g = pcm::run_graph_clustering(DistanceMatrix::from_points(d.points), c);
  pcm::PcmResult e = pcm::run_pcm(d.points);
  EXPECT_DOUBLE_EQ(g.sigma, e.tuned_sigma);
  EXPECT_EQ(g.assignment.labels, e.assignment.labels);
}
