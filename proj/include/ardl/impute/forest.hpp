#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ardl/rng.hpp"
#include "ardl/util/parallel.hpp"

namespace ardl::impute {

struct ForestParams {
  int trees = 100;
  int min_leaf = 2;
  int max_rounds = 10;
  double tol = 1e-3;
  std::uint64_t seed = 0;

  void validate() const {
    if (trees < 1) throw std::invalid_argument("forest: trees >= 1");
    if (min_leaf < 1) throw std::invalid_argument("forest: min_leaf >= 1");
    if (max_rounds < 1) throw std::invalid_argument("forest: max_rounds >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("forest: tol > 0");
  }
};

/// Binary regression tree stored as a flat node array; node 0 is the root.
struct RegressionTree {
  struct Node {
    int feature = -1;        // split feature; -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;      // leaf mean
  };
  std::vector<Node> nodes;

  [[nodiscard]] double predict(const std::vector<double>& row) const {
    int i = 0;
    for (;;) {
      const Node& nd = nodes[static_cast<std::size_t>(i)];
      if (nd.feature < 0) return nd.value;
      i = (row[static_cast<std::size_t>(nd.feature)] <= nd.threshold)
              ? nd.left
              : nd.right;
    }
  }
};

namespace detail {

/// Draw `m` distinct indices from [0, n) by partial Fisher-Yates, then sort
/// ascending so candidate evaluation order (and thus tie-breaking toward the
/// lowest feature index) is deterministic.
inline std::vector<int> sample_features(int n, int m, Rng& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_below(
                           static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double child_sse = 0.0;
};

/// Best variance-reduction split over the candidate features for the rows in
/// `members`. Equal-quality splits resolve to the lower feature index and
/// then the lower threshold (candidates are scanned in that order and only a
/// strict improvement replaces the incumbent).
inline SplitChoice best_split(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& targets,
                              const std::vector<int>& members,
                              const std::vector<int>& features, int min_leaf) {
  SplitChoice best;
  const std::size_t m = members.size();
  std::vector<int> order(m);
  std::vector<double> ys(m);
  for (const int f : features) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = rows[static_cast<std::size_t>(members[static_cast<std::size_t>(a)])]
                            [static_cast<std::size_t>(f)];
      const double vb = rows[static_cast<std::size_t>(members[static_cast<std::size_t>(b)])]
                            [static_cast<std::size_t>(f)];
      if (va != vb) return va < vb;
      return a < b;  // stable under ties for determinism
    });
    double suffix_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ys[i] = targets[static_cast<std::size_t>(
          members[static_cast<std::size_t>(order[i])])];
      suffix_sum += ys[i];
    }
    double left_sum = 0.0, left_sq = 0.0;
    double total_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) total_sq += ys[i] * ys[i];
    const double total_sum = suffix_sum;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      left_sum += ys[i];
      left_sq += ys[i] * ys[i];
      const std::size_t n_left = i + 1;
      const std::size_t n_right = m - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf)) continue;
      if (n_right < static_cast<std::size_t>(min_leaf)) break;
      const double vl = rows[static_cast<std::size_t>(
          members[static_cast<std::size_t>(order[i])])][static_cast<std::size_t>(f)];
      const double vr = rows[static_cast<std::size_t>(
          members[static_cast<std::size_t>(order[i + 1])])][static_cast<std::size_t>(f)];
      if (vl == vr) continue;  // cannot split between equal values
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse_left =
          left_sq - left_sum * left_sum / static_cast<double>(n_left);
      const double sse_right =
          right_sq - right_sum * right_sum / static_cast<double>(n_right);
      const double child_sse = sse_left + sse_right;
      if (!best.found || child_sse < best.child_sse) {
        best.found = true;
        best.feature = f;
        best.threshold = vl + 0.5 * (vr - vl);
        best.child_sse = child_sse;
      }
    }
  }
  return best;
}

inline int grow_node(RegressionTree& tree,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& targets,
                     std::vector<int>&& members, const ForestParams& params,
                     int n_features, int mtry, Rng& rng) {
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  double sum = 0.0, sq = 0.0;
  for (const int r : members) {
    const double y = targets[static_cast<std::size_t>(r)];
    sum += y;
    sq += y * y;
  }
  const double n = static_cast<double>(members.size());
  const double mean = sum / n;
  const double sse = sq - sum * sum / n;
  auto make_leaf = [&]() {
    tree.nodes[static_cast<std::size_t>(node_id)].feature = -1;
    tree.nodes[static_cast<std::size_t>(node_id)].value = mean;
    return node_id;
  };
  if (members.size() < 2 * static_cast<std::size_t>(params.min_leaf))
    return make_leaf();
  if (sse <= 1e-12 * std::max(1.0, sq)) return make_leaf();

  const auto features = sample_features(n_features, mtry, rng);
  const auto split = best_split(rows, targets, members, features, params.min_leaf);
  if (!split.found || split.child_sse >= sse) return make_leaf();

  std::vector<int> left, right;
  for (const int r : members) {
    const double v =
        rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(split.feature)];
    (v <= split.threshold ? left : right).push_back(r);
  }
  members.clear();
  tree.nodes[static_cast<std::size_t>(node_id)].feature = split.feature;
  tree.nodes[static_cast<std::size_t>(node_id)].threshold = split.threshold;
  const int l = grow_node(tree, rows, targets, std::move(left), params,
                          n_features, mtry, rng);
  tree.nodes[static_cast<std::size_t>(node_id)].left = l;
  const int r = grow_node(tree, rows, targets, std::move(right), params,
                          n_features, mtry, rng);
  tree.nodes[static_cast<std::size_t>(node_id)].right = r;
  return node_id;
}

}  // namespace detail

/// Number of split candidates per node: ceil(sqrt(#features)).
inline int mtry_for(int n_features) {
  return static_cast<int>(
      std::ceil(std::sqrt(static_cast<double>(n_features))));
}

/// Grow one tree on the given rows. The stream drives per-node feature
/// subsampling only; row sampling is the forest trainer's job. Fewer than
/// 2*min_leaf rows yield a single-leaf tree.
inline RegressionTree train_regression_tree(
    const std::vector<std::vector<double>>& rows,
    const std::vector<double>& targets, const ForestParams& params, Rng rng) {
  params.validate();
  if (rows.empty()) throw std::invalid_argument("tree: no training rows");
  if (rows.size() != targets.size())
    throw std::invalid_argument("tree: row/target count mismatch");
  const int n_features = static_cast<int>(rows.front().size());
  if (n_features == 0) throw std::invalid_argument("tree: zero features");
  RegressionTree tree;
  std::vector<int> members(rows.size());
  std::iota(members.begin(), members.end(), 0);
  detail::grow_node(tree, rows, targets, std::move(members), params,
                    n_features, mtry_for(n_features), rng);
  return tree;
}

/// Bagged forest: tree i trains on a bootstrap resample drawn from stream
/// (seed, i), which then continues to drive that tree's feature subsets.
/// Per-tree streams make the result independent of training schedule.
inline std::vector<RegressionTree> train_forest(
    const std::vector<std::vector<double>>& rows,
    const std::vector<double>& targets, const ForestParams& params,
    unsigned threads = 1) {
  params.validate();
  if (rows.empty()) throw std::invalid_argument("forest: no training rows");
  std::vector<RegressionTree> forest(static_cast<std::size_t>(params.trees));
  parallel_for(forest.size(), threads, [&](std::size_t i) {
    Rng rng = Rng::stream(params.seed, i);
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> boot_rows;
    std::vector<double> boot_targets;
    boot_rows.reserve(n);
    boot_targets.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto pick = rng.uniform_below(n);
      boot_rows.push_back(rows[pick]);
      boot_targets.push_back(targets[pick]);
    }
    forest[i] = train_regression_tree(boot_rows, boot_targets, params, rng);
  });
  return forest;
}

/// Arithmetic mean of the tree predictions.
inline double forest_predict(const std::vector<RegressionTree>& forest,
                             const std::vector<double>& row) {
  if (forest.empty()) throw std::invalid_argument("forest_predict: empty forest");
  double sum = 0.0;
  for (const auto& tree : forest) sum += tree.predict(row);
  return sum / static_cast<double>(forest.size());
}

}  // namespace ardl::impute
