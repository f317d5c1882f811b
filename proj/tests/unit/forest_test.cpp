#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "ara/error.hpp"
#include "ara/forest.hpp"
#include "cart_oracle.hpp"
#include "synthetic.hpp"

using namespace ara;

namespace {

Dataset column(std::vector<double> xs, std::vector<Level> ys) {
  Dataset d(1);
  for (std::size_t i = 0; i < xs.size(); ++i) d.add(std::vector<double>{xs[i]}, ys[i]);
  return d;
}

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.size());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

TreeNode node(int feature, int left, int right, ClassCounts counts) {
  TreeNode n;
  n.feature = feature;
  n.threshold = 0.5;
  n.left = left;
  n.right = right;
  n.class_counts = counts;
  n.prediction = majority(counts);
  return n;
}

ForestParams single_tree(std::uint64_t seed = 0) {
  ForestParams p;
  p.n_estimators = 1;
  p.max_features = MaxFeatures::All;
  p.bootstrap = false;
  p.seed = seed;
  return p;
}

Dataset random_small_dataset(Rng& rng, std::size_t rows, std::size_t features) {
  Dataset d(features);
  std::vector<double> x(features);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto& v : x) v = static_cast<double>(rng.below(5));  // coarse values force ties
    d.add(x, level_from_index(rng.below(3)));
  }
  return d;
}

}  // namespace

TEST(Gini, Values) {
  const std::vector<std::size_t> pure{3, 0, 0}, half{1, 1, 0}, even{2, 2, 2}, none{0, 0, 0};
  EXPECT_DOUBLE_EQ(gini(pure), 0.0);
  EXPECT_DOUBLE_EQ(gini(half), 0.5);
  EXPECT_DOUBLE_EQ(gini(even), 2.0 / 3.0);
  EXPECT_THROW(gini(none), Error);
}

TEST(Majority, LowestLevelWinsTies) {
  EXPECT_EQ(majority({2, 2, 1}), Level::L1);
  EXPECT_EQ(majority({0, 3, 3}), Level::L2);
  EXPECT_EQ(majority({0, 1, 4}), Level::L3);
}

TEST(BestSplit, Midpoint) {
  const auto d = column({1, 2, 3, 4}, {Level::L1, Level::L1, Level::L2, Level::L2});
  const std::vector<std::size_t> f{0};
  const auto s = best_split(d, all_rows(d), f);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->feature, 0u);
  EXPECT_DOUBLE_EQ(s->threshold, 2.5);
  EXPECT_DOUBLE_EQ(s->impurity_decrease, 0.5);
}

TEST(BestSplit, TiesGoToLowerThresholdThenFeature) {
  const auto d = column({1, 2, 3}, {Level::L1, Level::L2, Level::L1});
  const std::vector<std::size_t> f{0};
  EXPECT_DOUBLE_EQ(best_split(d, all_rows(d), f)->threshold, 1.5);

  Dataset twin(2);
  for (double x : {1.0, 2.0}) twin.add(std::vector<double>{x, x}, x < 1.5 ? Level::L1 : Level::L3);
  const std::vector<std::size_t> both{0, 1};
  EXPECT_EQ(best_split(twin, all_rows(twin), both)->feature, 0u);
  const std::vector<std::size_t> reversed{1, 0};
  EXPECT_EQ(best_split(twin, all_rows(twin), reversed)->feature, 0u);
}

TEST(BestSplit, NoneWhenPureConstantOrLeafTooSmall) {
  const std::vector<std::size_t> f{0};
  const auto pure = column({1, 2}, {Level::L2, Level::L2});
  EXPECT_FALSE(best_split(pure, all_rows(pure), f));
  const auto constant = column({1, 1}, {Level::L1, Level::L2});
  EXPECT_FALSE(best_split(constant, all_rows(constant), f));
  const auto d = column({1, 2, 3}, {Level::L1, Level::L2, Level::L1});
  EXPECT_FALSE(best_split(d, all_rows(d), f, 2));
}

TEST(BestSplit, RepeatedSamplesCount) {
  const auto d = column({1, 2}, {Level::L1, Level::L2});
  const std::vector<std::size_t> f{0}, rows{0, 0, 0, 1};
  const auto s = best_split(d, rows, f);
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->impurity_decrease, 0.375);  // 1 - (9+1)/16
}

TEST(Mdi, HandBuiltTree) {
  // root f2 [4,4,0] -> left f0 [4,1,0] -> {[4,0,0], [0,1,0]}; right [0,3,0].
  // Weighted decreases: root 0.5 - 5/8*0.32 = 0.3; left 5/8*0.32 = 0.2.
  std::vector<TreeNode> nodes{node(2, 1, 2, {4, 4, 0}), node(0, 3, 4, {4, 1, 0}), node(-1, -1, -1, {0, 3, 0}),
                              node(-1, -1, -1, {4, 0, 0}), node(-1, -1, -1, {0, 1, 0})};
  const Tree tree(nodes);
  const auto per_tree = tree.importances(3);
  EXPECT_NEAR(per_tree[0], 0.4, 1e-12);
  EXPECT_EQ(per_tree[1], 0.0);
  EXPECT_NEAR(per_tree[2], 0.6, 1e-12);

  const Tree stump(std::vector<TreeNode>{node(-1, -1, -1, {1, 0, 0})});
  ForestParams p;
  p.n_estimators = 2;
  const Forest forest(p, {"a", "b", "c"}, {tree, stump});
  const auto mdi = mdi_importance(forest);
  EXPECT_NEAR(mdi[0], 0.4, 1e-12);
  EXPECT_NEAR(mdi[2], 0.6, 1e-12);
  EXPECT_EQ(tree.split_count(), 2u);
  EXPECT_EQ(tree.depth(), 2u);
  EXPECT_EQ(tree.predict(std::vector<double>{0.0, 0.0, 0.0}), Level::L1);
  EXPECT_EQ(tree.predict(std::vector<double>{1.0, 0.0, 0.0}), Level::L2);
}

TEST(Mdi, OneHotImportance) {
  const auto d = column({1, 2, 3, 4}, {Level::L1, Level::L1, Level::L3, Level::L3});
  const auto forest = fit(d, single_tree(), {"only"});
  EXPECT_EQ(mdi_importance(forest), (std::vector<double>{1.0}));
}

TEST(Mdi, NoSplitsGivesZeros) {
  const auto d = column({1, 2}, {Level::L2, Level::L2});
  EXPECT_EQ(mdi_importance(fit(d, single_tree())), (std::vector<double>{0.0}));
}

TEST(Mdi, SumsToOneOnRandomForests) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_small_dataset(rng, 10 + rng.below(30), 1 + rng.below(6));
    ForestParams p;
    p.n_estimators = 10;
    p.seed = static_cast<std::uint64_t>(trial);
    const auto forest = fit(d, p);
    const auto mdi = mdi_importance(forest);
    bool any_split = false;
    for (const auto& t : forest.trees()) any_split = any_split || t.split_count() > 0;
    const double sum = std::accumulate(mdi.begin(), mdi.end(), 0.0);
    if (any_split) EXPECT_NEAR(sum, 1.0, 1e-9);
    for (double v : mdi) EXPECT_GE(v, 0.0);
  }
}

TEST(Mdi, InformativeFeatureRanksFirst) {
  int first = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(seed, 1));
    const auto d = fixtures::make_feature0_dataset(rng, 90, 6);
    ForestParams p;
    p.n_estimators = 20;
    p.seed = seed;
    const auto mdi = mdi_importance(fit(d, p));
    if (std::max_element(mdi.begin(), mdi.end()) == mdi.begin()) ++first;
  }
  EXPECT_GE(first, 9);
}

TEST(Tree, MatchesExhaustiveOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_small_dataset(rng, 2 + rng.below(11), 1 + rng.below(4));
    std::vector<fixtures::OracleRow> rows;
    for (std::size_t i = 0; i < d.size(); ++i) rows.push_back({{d.row(i).begin(), d.row(i).end()}, d.label(i)});
    const auto oracle = fixtures::oracle_tree(rows);
    const auto forest = fit(d, single_tree());
    std::vector<double> x(d.n_features());
    for (int probe = 0; probe < 200; ++probe) {
      for (auto& v : x) v = static_cast<double>(rng.below(11)) / 2.0 - 0.5;
      ASSERT_EQ(predict(forest, x), fixtures::oracle_predict(*oracle, x)) << "trial " << trial;
    }
  }
}

TEST(Fit, SeparableDataIsLearned) {
  const auto d = column({1, 2, 3, 4, 5, 6}, {Level::L1, Level::L1, Level::L2, Level::L2, Level::L3, Level::L3});
  ForestParams p;
  p.n_estimators = 25;
  p.seed = 3;
  const auto forest = fit(d, p);
  EXPECT_EQ(predict(forest, std::vector<double>{1.0}), Level::L1);
  EXPECT_EQ(predict(forest, std::vector<double>{6.0}), Level::L3);
  EXPECT_EQ(forest.feature_names().size(), 1u);
}

TEST(Fit, MaxDepthIsRespected) {
  Rng rng(5);
  const auto d = random_small_dataset(rng, 40, 3);
  auto p = single_tree();
  p.max_depth = 2;
  EXPECT_LE(fit(d, p).trees()[0].depth(), 2u);
}

TEST(Fit, DeterministicAcrossJobsAndRowOrder) {
  Rng rng(8);
  const auto d = random_small_dataset(rng, 60, 5);
  ForestParams p;
  p.n_estimators = 12;
  p.seed = 42;
  const auto a = fit(d, p, {}, 1).to_json().dump();
  EXPECT_EQ(fit(d, p, {}, 4).to_json().dump(), a);

  std::vector<std::size_t> order = all_rows(d);
  Rng shuffle_rng(1);
  shuffle_rng.shuffle(order);
  Dataset shuffled(d.n_features());
  for (auto i : order) shuffled.add(d.row(i), d.label(i));
  EXPECT_EQ(fit(shuffled, p, {}, 2).to_json().dump(), a);

  p.seed = 43;
  EXPECT_NE(fit(d, p).to_json().dump(), a);
}

TEST(Fit, Errors) {
  Dataset empty(2);
  EXPECT_THROW(fit(empty, ForestParams{}), Error);
  const auto d = column({1, 2}, {Level::L1, Level::L2});
  ForestParams bad;
  bad.n_estimators = 0;
  EXPECT_THROW(fit(d, bad), Error);
  EXPECT_THROW(fit(d, ForestParams{}, {"a", "b"}), Error);
  const auto forest = fit(d, single_tree());
  EXPECT_THROW(predict(forest, std::vector<double>{1.0, 2.0}), Error);
  EXPECT_THROW(predict(Forest{}, std::vector<double>{1.0}), Error);
  Dataset two(2);
  EXPECT_THROW(two.add(std::vector<double>{1.0}, Level::L1), Error);
}

TEST(Params, FeaturesPerNodeAndJson) {
  ForestParams p;
  EXPECT_EQ(p.features_per_node(32), 5u);
  EXPECT_EQ(p.features_per_node(1), 1u);
  p.max_features = MaxFeatures::Count;
  p.max_features_count = 50;
  EXPECT_EQ(p.features_per_node(32), 32u);
  p.max_depth = 7;
  const auto back = ForestParams::from_json(nlohmann::json::parse(p.to_json().dump()));
  EXPECT_EQ(back.to_json().dump(), p.to_json().dump());
  EXPECT_THROW(ForestParams::from_json(nlohmann::json{{"criterion", "entropy"}}), Error);
}

TEST(Model, SaveLoadRoundTrip) {
  Rng rng(2);
  const auto d = random_small_dataset(rng, 30, 3);
  ForestParams p;
  p.n_estimators = 5;
  p.seed = 9;
  const auto forest = fit(d, p, {"x", "y", "z"});
  const auto path = std::filesystem::temp_directory_path() / "ara_forest_test.json";
  forest.save(path);
  const auto back = Forest::load(path);
  EXPECT_EQ(back.to_json().dump(), forest.to_json().dump());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(predict(back, d.row(i)), predict(forest, d.row(i)));
  std::filesystem::remove(path);
  EXPECT_THROW(Forest::from_json(nlohmann::json{{"format", "other"}}), Error);
}
