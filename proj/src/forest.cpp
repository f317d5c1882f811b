#include "ara/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ara/error.hpp"
#include "ara/parallel.hpp"

namespace ara {
namespace {

using Wide = __int128;

// Sum over both children of (sum_k c_k^2) / n_child, held as a fraction.
// A larger value means a lower weighted child impurity.
struct SplitScore {
  Wide num = 0;
  Wide den = 1;

  bool better_than(const SplitScore& other) const { return num * other.den > other.num * den; }
  bool ties(const SplitScore& other) const { return num * other.den == other.num * den; }
};

Wide square_sum(const ClassCounts& c) {
  Wide s = 0;
  for (auto v : c) s += static_cast<Wide>(v) * static_cast<Wide>(v);
  return s;
}

ClassCounts count_labels(const Dataset& data, std::span<const std::size_t> samples) {
  ClassCounts c{};
  for (std::size_t i : samples) ++c[level_index(data.label(i))];
  return c;
}

bool pure(const ClassCounts& c) {
  int nonzero = 0;
  for (auto v : c) nonzero += v > 0;
  return nonzero <= 1;
}

double midpoint(double a, double b) {
  double t = a + (b - a) / 2.0;
  if (!(t >= a && t < b)) t = a;
  return t;
}

nlohmann::ordered_json node_to_json(const std::vector<TreeNode>& nodes, int i) {
  const TreeNode& n = nodes[i];
  nlohmann::ordered_json j;
  if (n.is_leaf()) {
    j["counts"] = n.class_counts;
    j["prediction"] = std::string(to_string(n.prediction));
  } else {
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["counts"] = n.class_counts;
    j["left"] = node_to_json(nodes, n.left);
    j["right"] = node_to_json(nodes, n.right);
  }
  return j;
}

int node_from_json(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  TreeNode node;
  node.class_counts = j.at("counts").get<ClassCounts>();
  node.prediction = majority(node.class_counts);
  if (j.contains("feature")) {
    node.feature = j.at("feature").get<int>();
    if (node.feature < 0) throw Error("negative feature index in model");
    node.threshold = j.at("threshold").get<double>();
    node.left = node_from_json(j.at("left"), nodes);
    node.right = node_from_json(j.at("right"), nodes);
  } else if (j.contains("prediction")) {
    node.prediction = parse_level(j.at("prediction").get<std::string>());
  }
  nodes[index] = node;
  return index;
}

}  // namespace

double gini(std::span<const std::size_t> class_counts) {
  double total = 0.0;
  for (auto c : class_counts) total += static_cast<double>(c);
  if (total <= 0.0) throw Error("gini of an empty node");
  double sum_sq = 0.0;
  for (auto c : class_counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

void Dataset::add(std::span<const double> row, Level label) {
  if (row.size() != n_features_) {
    throw Error("row has " + std::to_string(row.size()) + " values, expected " + std::to_string(n_features_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  labels_.push_back(label);
}

// ---------------------------------------------------------------------------

void ForestParams::validate() const {
  if (n_estimators < 1) throw Error("n_estimators must be >= 1");
  if (min_samples_split < 2) throw Error("min_samples_split must be >= 2");
  if (min_samples_leaf < 1) throw Error("min_samples_leaf must be >= 1");
  if (max_depth && *max_depth < 1) throw Error("max_depth must be >= 1");
  if (max_features == MaxFeatures::Count && max_features_count < 1) throw Error("max_features must be >= 1");
}

std::size_t ForestParams::features_per_node(std::size_t n_features) const {
  std::size_t k = n_features;
  switch (max_features) {
    case MaxFeatures::Sqrt:
      k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features))));
      break;
    case MaxFeatures::All:
      break;
    case MaxFeatures::Count:
      k = static_cast<std::size_t>(max_features_count);
      break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n_features, 1));
}

nlohmann::ordered_json ForestParams::to_json() const {
  nlohmann::ordered_json j;
  j["n_estimators"] = n_estimators;
  j["criterion"] = "gini";
  j["max_depth"] = max_depth ? nlohmann::ordered_json(*max_depth) : nlohmann::ordered_json(nullptr);
  j["min_samples_split"] = min_samples_split;
  j["min_samples_leaf"] = min_samples_leaf;
  switch (max_features) {
    case MaxFeatures::Sqrt: j["max_features"] = "sqrt"; break;
    case MaxFeatures::All: j["max_features"] = "all"; break;
    case MaxFeatures::Count: j["max_features"] = max_features_count; break;
  }
  j["bootstrap"] = bootstrap;
  j["seed"] = seed;
  return j;
}

ForestParams ForestParams::from_json(const nlohmann::json& j) {
  ForestParams p;
  try {
    p.n_estimators = j.value("n_estimators", p.n_estimators);
    if (j.value("criterion", std::string("gini")) != "gini") throw Error("only the gini criterion is supported");
    if (j.contains("max_depth") && !j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_split = j.value("min_samples_split", p.min_samples_split);
    p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
    if (j.contains("max_features")) {
      const auto& mf = j.at("max_features");
      if (mf.is_string() && mf.get<std::string>() == "sqrt") {
        p.max_features = MaxFeatures::Sqrt;
      } else if (mf.is_string() && mf.get<std::string>() == "all") {
        p.max_features = MaxFeatures::All;
      } else if (mf.is_number_integer()) {
        p.max_features = MaxFeatures::Count;
        p.max_features_count = mf.get<int>();
      } else {
        throw Error("max_features must be \"sqrt\", \"all\" or an integer");
      }
    }
    p.bootstrap = j.value("bootstrap", p.bootstrap);
    p.seed = j.value("seed", p.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed forest parameters: ") + e.what());
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> samples,
                                std::span<const std::size_t> features, int min_samples_leaf) {
  const std::size_t n = samples.size();
  if (n < 2) return std::nullopt;
  const ClassCounts total = count_labels(data, samples);
  const auto leaf_min = static_cast<std::size_t>(std::max(min_samples_leaf, 1));

  // Parent score sum c^2 / n; a split must beat it strictly.
  const SplitScore parent{square_sum(total), static_cast<Wide>(n)};
  std::optional<SplitScore> best_score;
  std::optional<Split> best;
  ClassCounts best_left{};

  std::vector<std::pair<double, std::size_t>> column(n);
  for (std::size_t f : features) {
    for (std::size_t k = 0; k < n; ++k) column[k] = {data.value(samples[k], f), level_index(data.label(samples[k]))};
    std::sort(column.begin(), column.end());

    ClassCounts left{};
    for (std::size_t k = 0; k + 1 < n; ++k) {
      ++left[column[k].second];
      if (!(column[k].first < column[k + 1].first)) continue;
      const std::size_t n_left = k + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < leaf_min || n_right < leaf_min) continue;
      ClassCounts right{};
      for (std::size_t c = 0; c < kNumLevels; ++c) right[c] = total[c] - left[c];
      const SplitScore score{square_sum(left) * static_cast<Wide>(n_right) + square_sum(right) * static_cast<Wide>(n_left),
                             static_cast<Wide>(n_left) * static_cast<Wide>(n_right)};
      if (!score.better_than(parent)) continue;
      const double threshold = midpoint(column[k].first, column[k + 1].first);
      if (best_score && !score.better_than(*best_score)) {
        // Equal scores: the lower feature index, then the lower threshold.
        if (!score.ties(*best_score)) continue;
        if (f > best->feature || (f == best->feature && threshold >= best->threshold)) continue;
      }
      best_score = score;
      best = Split{f, threshold, 0.0};
      best_left = left;
    }
  }
  if (!best) return std::nullopt;

  ClassCounts right{};
  std::size_t n_left = 0;
  for (std::size_t c = 0; c < kNumLevels; ++c) {
    right[c] = total[c] - best_left[c];
    n_left += best_left[c];
  }
  const double fn = static_cast<double>(n);
  best->impurity_decrease = gini(total) - (static_cast<double>(n_left) / fn) * gini(best_left) -
                            (static_cast<double>(n - n_left) / fn) * gini(right);
  return best;
}

// ---------------------------------------------------------------------------

Level majority(const ClassCounts& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLevels; ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return level_from_index(best);
}

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  const int size = static_cast<int>(nodes_.size());
  for (const auto& n : nodes_) {
    if (n.is_leaf()) continue;
    if (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size) throw Error("tree node has invalid children");
  }
}

Level Tree::predict(std::span<const double> x) const {
  if (nodes_.empty()) throw Error("empty tree");
  int i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    if (static_cast<std::size_t>(n.feature) >= x.size()) throw Error("feature index out of range");
    i = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].prediction;
}

std::size_t Tree::split_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {  // children always follow parents
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return deepest;
}

std::vector<double> Tree::importances(std::size_t n_features) const {
  std::vector<double> imp(n_features, 0.0);
  if (nodes_.empty()) return imp;
  const auto root_n = static_cast<double>(nodes_[0].samples());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    const auto& l = nodes_[node.left];
    const auto& r = nodes_[node.right];
    const auto n = static_cast<double>(node.samples());
    const auto nl = static_cast<double>(l.samples());
    const auto nr = static_cast<double>(r.samples());
    const double decrease = gini(node.class_counts) - (nl / n) * gini(l.class_counts) - (nr / n) * gini(r.class_counts);
    imp.at(node.feature) += (n / root_n) * decrease;
  }
  const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : imp) v /= total;
  }
  return imp;
}

nlohmann::ordered_json Tree::to_json() const {
  if (nodes_.empty()) throw Error("empty tree");
  return node_to_json(nodes_, 0);
}

Tree Tree::from_json(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  node_from_json(j, nodes);
  return Tree(std::move(nodes));
}

Tree grow_tree(const Dataset& data, std::span<const std::size_t> samples, const ForestParams& params, Rng& rng) {
  if (samples.empty()) throw Error("cannot grow a tree on zero samples");
  const std::size_t per_node = params.features_per_node(data.n_features());
  std::vector<TreeNode> nodes;

  auto build = [&](auto& self, std::vector<std::size_t> node_samples, int depth) -> int {
    const int index = static_cast<int>(nodes.size());
    TreeNode node;
    node.class_counts = count_labels(data, node_samples);
    node.prediction = majority(node.class_counts);
    nodes.push_back(node);

    const std::size_t n = node_samples.size();
    if (n < static_cast<std::size_t>(params.min_samples_split) ||
        n < 2 * static_cast<std::size_t>(params.min_samples_leaf) || pure(node.class_counts) ||
        (params.max_depth && depth >= *params.max_depth)) {
      return index;
    }
    auto features = rng.sample_without_replacement(data.n_features(), per_node);
    std::sort(features.begin(), features.end());
    const auto split = best_split(data, node_samples, features, params.min_samples_leaf);
    if (!split) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t i : node_samples) {
      (data.value(i, split->feature) <= split->threshold ? left : right).push_back(i);
    }
    node_samples.clear();
    node_samples.shrink_to_fit();
    const int l = self(self, std::move(left), depth + 1);
    const int r = self(self, std::move(right), depth + 1);
    nodes[index].feature = static_cast<int>(split->feature);
    nodes[index].threshold = split->threshold;
    nodes[index].left = l;
    nodes[index].right = r;
    return index;
  };
  build(build, std::vector<std::size_t>(samples.begin(), samples.end()), 0);
  return Tree(std::move(nodes));
}

// ---------------------------------------------------------------------------

Forest::Forest(ForestParams params, std::vector<std::string> feature_names, std::vector<Tree> trees)
    : params_(params), feature_names_(std::move(feature_names)), trees_(std::move(trees)) {
  params_.validate();
  if (trees_.size() != static_cast<std::size_t>(params_.n_estimators)) {
    throw Error("forest has " + std::to_string(trees_.size()) + " trees, expected " +
                std::to_string(params_.n_estimators));
  }
  for (const auto& t : trees_) {
    for (const auto& n : t.nodes()) {
      if (!n.is_leaf() && static_cast<std::size_t>(n.feature) >= feature_names_.size()) {
        throw Error("tree uses feature " + std::to_string(n.feature) + " beyond the feature list");
      }
    }
  }
}

nlohmann::ordered_json Forest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "ara-forest";
  j["version"] = 1;
  j["rng_version"] = kRngVersion;
  j["params"] = params_.to_json();
  j["feature_names"] = feature_names_;
  j["classes"] = {"L1", "L2", "L3"};
  nlohmann::ordered_json trees = nlohmann::ordered_json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  j["trees"] = std::move(trees);
  return j;
}

Forest Forest::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "ara-forest") throw Error("not a forest model file");
    if (j.at("version").get<int>() != 1) throw Error("unsupported model version");
    if (j.at("classes") != nlohmann::json({"L1", "L2", "L3"})) throw Error("unexpected class labels");
    auto params = ForestParams::from_json(j.at("params"));
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    std::vector<Tree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
    return Forest(params, std::move(names), std::move(trees));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  }
}

void Forest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json().dump() << '\n';
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

Forest Forest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Forest fit(const Dataset& data, const ForestParams& params, std::vector<std::string> feature_names, std::size_t jobs) {
  params.validate();
  if (data.empty()) throw Error("cannot fit a forest on an empty dataset");
  if (feature_names.empty()) {
    for (std::size_t f = 0; f < data.n_features(); ++f) feature_names.push_back("x" + std::to_string(f));
  }
  if (feature_names.size() != data.n_features()) throw Error("feature name count does not match the data");

  // Canonical row order: lexicographic on (values, label).
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = data.row(a);
    const auto rb = data.row(b);
    const int cmp = std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())   ? -1
                    : std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end()) ? 1
                                                                                               : 0;
    if (cmp != 0) return cmp < 0;
    return data.label(a) < data.label(b);
  });
  Dataset canonical(data.n_features());
  for (std::size_t i : order) canonical.add(data.row(i), data.label(i));

  const std::size_t n = canonical.size();
  std::vector<Tree> trees(static_cast<std::size_t>(params.n_estimators));
  parallel_for(trees.size(), jobs, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t));
    std::vector<std::size_t> samples(n);
    if (params.bootstrap) {
      for (auto& s : samples) s = rng.below(n);
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    trees[t] = grow_tree(canonical, samples, params, rng);
  });
  return Forest(params, std::move(feature_names), std::move(trees));
}

Level predict(const Forest& forest, std::span<const double> x) {
  if (!forest.fitted()) throw Error("forest is not fitted");
  if (x.size() != forest.n_features()) {
    throw Error("input has " + std::to_string(x.size()) + " features, model expects " +
                std::to_string(forest.n_features()));
  }
  ClassCounts votes{};
  for (const auto& tree : forest.trees()) ++votes[level_index(tree.predict(x))];
  return majority(votes);
}

std::vector<double> mdi_importance(const Forest& forest) {
  if (!forest.fitted()) throw Error("forest is not fitted");
  std::vector<double> mean(forest.n_features(), 0.0);
  std::size_t contributing = 0;
  for (const auto& tree : forest.trees()) {
    if (tree.split_count() == 0) continue;
    const auto imp = tree.importances(forest.n_features());
    for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += imp[f];
    ++contributing;
  }
  if (contributing == 0) return mean;
  const double total = std::accumulate(mean.begin(), mean.end(), 0.0);
  for (auto& v : mean) v /= total;
  return mean;
}

}  // namespace ara
