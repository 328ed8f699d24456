#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pcm/random.hpp"

using pcm::SplitMix64;

// Reference outputs from an independent implementation of the same recurrence.
TEST(SplitMix64, ReferenceStream) {
  SplitMix64 a(0);
  EXPECT_EQ(a.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(a.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(a.next(), 0x06c45d188009454fULL);
  SplitMix64 b(42);
  EXPECT_EQ(b.next(), 0xbdd732262feb6e95ULL);
  EXPECT_EQ(b.next(), 0x28efe333b266f103ULL);
}

TEST(SplitMix64, DerivedDraws) {
  SplitMix64 u(42);
  EXPECT_EQ(u.uniform01(), 0.7415648787718233);
  EXPECT_EQ(u.uniform01(), 0.1599103928769201);

  SplitMix64 b(7);
  const std::vector<std::uint64_t> expected{7, 4, 6, 3, 4, 5, 8, 2};
  for (auto e : expected) EXPECT_EQ(b.below(10), e);

  SplitMix64 n(123);
  EXPECT_NEAR(n.normal(), 0.8134225392090133, 1e-15);
  EXPECT_NEAR(n.normal(), 0.422468530728883, 1e-15);
  EXPECT_NEAR(n.normal(), 1.2386077102727322, 1e-15);
  EXPECT_NEAR(n.normal(), 1.1121771835922292, 1e-15);
}

TEST(SplitMix64, RangesAndMoments) {
  SplitMix64 r(5);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(3), 3u);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  EXPECT_EQ(r.below(1), 0u);
}

TEST(SplitMix64, SplitIsDeterministicAndDistinct) {
  SplitMix64 a(9), b(9);
  SplitMix64 ca = a.split(), cb = b.split();
  EXPECT_EQ(ca.next(), cb.next());
  EXPECT_NE(a.next(), ca.next());
}
