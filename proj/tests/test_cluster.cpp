#include <gtest/gtest.h>

#include "pcm/cluster.hpp"

TEST(UnionFind, ComponentsByFirstAppearance) {
  pcm::UnionFind uf(6);
  EXPECT_TRUE(uf.unite(4, 5));
  EXPECT_TRUE(uf.unite(1, 4));
  EXPECT_FALSE(uf.unite(5, 1));
  EXPECT_TRUE(uf.unite(0, 2));
  EXPECT_EQ(uf.find(5), uf.find(1));
  EXPECT_NE(uf.find(0), uf.find(1));
  EXPECT_EQ(uf.component_labels(), (std::vector<std::size_t>{0, 1, 0, 2, 1, 1}));
}

TEST(UnionFind, Singletons) {
  pcm::UnionFind uf(3);
  EXPECT_EQ(uf.component_labels(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Canonical, RelabelsAndCountsSizes) {
  pcm::ClusterAssignment a = pcm::canonical_assignment({7, 7, 3, 9, 3, 7});
  EXPECT_EQ(a.labels, (std::vector<std::size_t>{0, 0, 1, 2, 1, 0}));
  EXPECT_EQ(a.sizes, (std::vector<std::size_t>{3, 2, 1}));
  EXPECT_EQ(a.cluster_count(), 3u);
  EXPECT_TRUE(a.centers.empty());
}

TEST(Canonical, PermutedLabelingsCompareEqual) {
  EXPECT_EQ(pcm::canonical_assignment({2, 2, 0, 1}), pcm::canonical_assignment({5, 5, 1, 0}));
}
