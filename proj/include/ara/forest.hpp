#pragma once

// CART classification trees and a bagged random forest over the three
// reading levels. Gini impurity, midpoint thresholds (value <= threshold goes
// left), per-node feature subsampling without replacement, mean decrease in
// impurity importances.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ara/corpus.hpp"
#include "ara/rng.hpp"
#include "json.hpp"

namespace ara {

using ClassCounts = std::array<std::size_t, kNumLevels>;

// 1 - sum p_i^2. Throws when the counts sum to zero.
double gini(std::span<const std::size_t> class_counts);

class Dataset {
 public:
  explicit Dataset(std::size_t n_features) : n_features_(n_features) {}

  void add(std::span<const double> row, Level label);

  std::size_t n_features() const { return n_features_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_features_, n_features_}; }
  double value(std::size_t i, std::size_t feature) const { return values_[i * n_features_ + feature]; }
  Level label(std::size_t i) const { return labels_[i]; }
  std::span<const Level> labels() const { return labels_; }

 private:
  std::size_t n_features_;
  std::vector<double> values_;
  std::vector<Level> labels_;
};

enum class MaxFeatures { Sqrt, All, Count };

struct ForestParams {
  int n_estimators = 100;
  std::optional<int> max_depth;  // unlimited when empty
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  int max_features_count = 0;  // used with MaxFeatures::Count
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate() const;
  // Number of features offered at each node.
  std::size_t features_per_node(std::size_t n_features) const;

  nlohmann::ordered_json to_json() const;
  static ForestParams from_json(const nlohmann::json& j);
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;  // gini(node) - weighted child gini
};

// Best split of `samples` (dataset row indices, repeats allowed) over the
// candidate features. Candidates are midpoints between consecutive distinct
// values. Splits are ranked exactly on integer class counts; ties go to the
// lower feature index, then the lower threshold. Empty when no split has a
// positive decrease or every split leaves a child below min_samples_leaf.
std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> samples,
                                std::span<const std::size_t> features, int min_samples_leaf = 1);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  ClassCounts class_counts{};
  Level prediction = Level::L1;

  bool is_leaf() const { return feature < 0; }
  std::size_t samples() const { return class_counts[0] + class_counts[1] + class_counts[2]; }
};

// argmax with the lowest level winning ties.
Level majority(const ClassCounts& counts);

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes);

  Level predict(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t split_count() const;
  std::size_t depth() const;
  // Per-feature impurity decrease weighted by node share, normalized to sum
  // to one; all zeros for a tree without splits.
  std::vector<double> importances(std::size_t n_features) const;

  nlohmann::ordered_json to_json() const;  // nested node encoding
  static Tree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

// Grows one tree on `samples` (repeats allowed). Features offered at each
// node are drawn from `rng`.
Tree grow_tree(const Dataset& data, std::span<const std::size_t> samples, const ForestParams& params, Rng& rng);

class Forest {
 public:
  Forest() = default;
  Forest(ForestParams params, std::vector<std::string> feature_names, std::vector<Tree> trees);

  bool fitted() const { return !trees_.empty(); }
  const ForestParams& params() const { return params_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t n_features() const { return feature_names_.size(); }

  nlohmann::ordered_json to_json() const;
  static Forest from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Forest load(const std::filesystem::path& path);

 private:
  ForestParams params_;
  std::vector<std::string> feature_names_;
  std::vector<Tree> trees_;
};

// Tree t uses Rng(derive_seed(params.seed, t)) for its bootstrap draw and
// feature sampling. Rows are put in a canonical order first, so the result
// does not depend on the order of the input rows or on `jobs`.
Forest fit(const Dataset& data, const ForestParams& params, std::vector<std::string> feature_names = {},
           std::size_t jobs = 1);

// Majority vote; ties go to the lowest level.
Level predict(const Forest& forest, std::span<const double> x);

// Mean of per-tree normalized importances over trees that split at least
// once, renormalized to sum to one. All zeros when no tree splits.
std::vector<double> mdi_importance(const Forest& forest);

}  // namespace ara
