#include "cart_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace ara::fixtures {
namespace {

std::array<std::int64_t, 3> tally(const std::vector<OracleRow>& rows) {
  std::array<std::int64_t, 3> c{};
  for (const auto& r : rows) ++c[level_index(r.y)];
  return c;
}

// sum of squared class counts; purity score numerator for n samples.
std::int64_t sq(const std::array<std::int64_t, 3>& c) { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }

Level argmax(const std::array<std::int64_t, 3>& c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (c[i] > c[best]) best = i;
  return level_from_index(best);
}

}  // namespace

std::unique_ptr<OracleNode> oracle_tree(const std::vector<OracleRow>& rows) {
  auto node = std::make_unique<OracleNode>();
  const auto counts = tally(rows);
  node->prediction = argmax(counts);
  const auto n = static_cast<std::int64_t>(rows.size());
  if (rows.size() < 2 || sq(counts) == n * n) return node;

  // Weighted child gini is minimal where sq(L)/nL + sq(R)/nR is maximal.
  bool found = false;
  std::int64_t best_num = sq(counts) * 1, best_den = n;  // must beat the parent strictly
  std::size_t best_f = 0;
  double best_t = 0.0;
  const std::size_t d = rows.front().x.size();
  for (std::size_t f = 0; f < d; ++f) {
    std::set<double> values;
    for (const auto& r : rows) values.insert(r.x[f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double t = *it + (*std::next(it) - *it) / 2.0;
      std::vector<OracleRow> l, r;
      for (const auto& row : rows) (row.x[f] <= t ? l : r).push_back(row);
      const auto nl = static_cast<std::int64_t>(l.size()), nr = static_cast<std::int64_t>(r.size());
      const std::int64_t num = sq(tally(l)) * nr + sq(tally(r)) * nl;
      const std::int64_t den = nl * nr;
      // Strictly better only; the scan order realizes the lower-feature,
      // lower-threshold tie-break.
      if (num * best_den > best_num * den) {
        best_num = num;
        best_den = den;
        best_f = f;
        best_t = t;
        found = true;
      }
    }
  }
  if (!found) return node;
  std::vector<OracleRow> l, r;
  for (const auto& row : rows) (row.x[best_f] <= best_t ? l : r).push_back(row);
  node->leaf = false;
  node->feature = best_f;
  node->threshold = best_t;
  node->left = oracle_tree(l);
  node->right = oracle_tree(r);
  return node;
}

Level oracle_predict(const OracleNode& node, const std::vector<double>& x) {
  if (node.leaf) return node.prediction;
  return oracle_predict(x[node.feature] <= node.threshold ? *node.left : *node.right, x);
}

}  // namespace ara::fixtures
