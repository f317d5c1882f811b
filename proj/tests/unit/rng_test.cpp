#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ara/parallel.hpp"
#include "ara/rng.hpp"

using namespace ara;

TEST(Rng, EngineSequenceIsStandard) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  std::mt19937_64 reference;
  reference.discard(9999);
  Rng rng(std::mt19937_64::default_seed);
  for (int i = 0; i < 9999; ++i) rng.next();
  EXPECT_EQ(rng.next(), 9981545732273789042ULL);
  EXPECT_EQ(reference(), 9981545732273789042ULL);
}

TEST(Rng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t stream = 0; stream < 100; ++stream) seeds.insert(derive_seed(s, stream));
  EXPECT_EQ(seeds.size(), 400u);
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, ShuffleAndSampleArePermutations) {
  Rng rng(3);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto copy = v;
  rng.shuffle(copy);
  EXPECT_NE(copy, v);
  std::sort(copy.begin(), copy.end());
  EXPECT_EQ(copy, v);
  const auto s = rng.sample_without_replacement(20, 8);
  EXPECT_EQ(s.size(), 8u);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 8u);
  for (auto x : s) EXPECT_LT(x, 20u);
}

TEST(Parallel, RunsEveryIndexOnceAndRethrows) {
  std::vector<int> seen(100, 0);
  parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i] += 1; });
  EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
