#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "vqcount/random.hpp"

using namespace vqcount;

TEST(Random, DeriveSeedIsDeterministicAndSpreads) {
  EXPECT_EQ(derive_seed(7, 1), derive_seed(7, 1));
  std::set<std::uint64_t> seen;
  for (std::uint64_t parent = 0; parent < 50; ++parent) {
    for (std::uint64_t stream = 0; stream < 50; ++stream) seen.insert(derive_seed(parent, stream));
  }
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(Random, SplitMixKnownValue) {
  // first output of the reference SplitMix64 generator seeded with 0
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Random, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Random, BelowStaysInRangeAndCoversIt) {
  Rng rng(5);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto x = rng.below(7);
    ASSERT_LT(x, 7u);
    ++hist[x];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Random, UniformInUnitInterval) {
  Rng rng(9);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Random, GeometricMatchesPmf) {
  const double p = 0.3;
  Rng rng(11);
  const int draws = 200000;
  std::vector<int> hist(12, 0);
  double sum = 0;
  for (int i = 0; i < draws; ++i) {
    const auto g = rng.geometric(p);
    ASSERT_GE(g, 1u);
    sum += static_cast<double>(g);
    if (g < hist.size()) ++hist[g];
  }
  EXPECT_NEAR(sum / draws, 1.0 / p, 0.03);
  double chi2 = 0;
  for (std::size_t k = 1; k < hist.size(); ++k) {
    const double expect = draws * std::pow(1 - p, static_cast<double>(k - 1)) * p;
    chi2 += (hist[k] - expect) * (hist[k] - expect) / expect;
  }
  // 10 degrees of freedom, 99.9th percentile is 29.6
  EXPECT_LT(chi2, 29.6);
}

TEST(Random, GeometricWithCertainSuccess) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.geometric(1.0), 1u);
}

TEST(Random, ShuffleIsAPermutation) {
  Rng rng(3);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(std::span<int>(w));
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}
