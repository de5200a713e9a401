#include "iotchain/baselines/isolation_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/rng.hpp"

namespace iotchain::baselines {

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  const double m = static_cast<double>(n);
  return 2.0 * harmonic(n - 1) - 2.0 * (m - 1.0) / m;
}

double anomaly_score(double mean_path, std::size_t subsample_size) {
  const double c = average_path_length(subsample_size);
  return std::exp2(-mean_path / c);
}

IsolationForest IsolationForest::fit(std::span<const FeatureVector> data, const IForestConfig& config) {
  if (config.tree_count == 0) throw Error(Errc::invalid_argument, "iforest needs at least one tree");
  if (config.subsample_size < 2) throw Error(Errc::invalid_argument, "iforest subsample size must be at least 2");
  if (data.size() < config.subsample_size) {
    throw Error(Errc::invalid_argument, "iforest subsample size " + std::to_string(config.subsample_size) +
                                            " exceeds data size " + std::to_string(data.size()));
  }
  const std::size_t dim = data.front().size();
  for (const auto& row : data) {
    if (row.size() != dim) throw Error(Errc::dimension_mismatch, "iforest rows have different widths");
  }

  IsolationForest forest;
  forest.subsample_size_ = config.subsample_size;
  forest.trained_size_ = data.size();
  forest.depth_cap_ = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(config.subsample_size))));
  forest.dim_ = dim;

  core::Rng rng(config.seed);
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> candidates;

  for (std::size_t t = 0; t < config.tree_count; ++t) {
    rng.shuffle(std::span<std::size_t>(all));
    std::vector<std::size_t> idx(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(config.subsample_size));

    Tree tree;
    struct Pending {
      std::uint32_t node;
      std::size_t begin;
      std::size_t end;
    };
    tree.push_back(Node{-1, 0.0, 0, 0, static_cast<std::uint32_t>(idx.size()), 0});
    std::vector<Pending> stack{{0, 0, idx.size()}};
    while (!stack.empty()) {
      const auto [node_id, begin, end] = stack.back();
      stack.pop_back();
      const auto depth = tree[node_id].depth;
      if (end - begin <= 1 || depth >= forest.depth_cap_) continue;

      // Only features with spread in this node can split it.
      candidates.clear();
      for (std::size_t f = 0; f < dim; ++f) {
        const double first = data[idx[begin]][f];
        for (std::size_t k = begin + 1; k < end; ++k) {
          if (data[idx[k]][f] != first) {
            candidates.push_back(f);
            break;
          }
        }
      }
      if (candidates.empty()) continue;

      const auto feature = candidates[rng.below(candidates.size())];
      double lo = data[idx[begin]][feature];
      double hi = lo;
      for (std::size_t k = begin; k < end; ++k) {
        lo = std::min(lo, data[idx[k]][feature]);
        hi = std::max(hi, data[idx[k]][feature]);
      }
      double split = rng.uniform(lo, hi);
      if (split <= lo) split = std::nextafter(lo, hi);

      const auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                         idx.begin() + static_cast<std::ptrdiff_t>(end),
                                         [&](std::size_t i) { return data[i][feature] < split; });
      const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

      const auto left = static_cast<std::uint32_t>(tree.size());
      tree.push_back(Node{-1, 0.0, 0, 0, static_cast<std::uint32_t>(mid - begin), depth + 1});
      const auto right = static_cast<std::uint32_t>(tree.size());
      tree.push_back(Node{-1, 0.0, 0, 0, static_cast<std::uint32_t>(end - mid), depth + 1});
      tree[node_id].feature = static_cast<int>(feature);
      tree[node_id].split = split;
      tree[node_id].left = left;
      tree[node_id].right = right;
      stack.push_back({right, mid, end});
      stack.push_back({left, begin, mid});
    }
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double IsolationForest::path_length(const Tree& tree, std::span<const double> x) const {
  const Node* node = &tree.front();
  while (node->feature >= 0) {
    node = &tree[x[static_cast<std::size_t>(node->feature)] < node->split ? node->left : node->right];
  }
  return static_cast<double>(node->depth) + average_path_length(node->size);
}

double IsolationForest::mean_path_length(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw Error(Errc::dimension_mismatch,
                "iforest expects " + std::to_string(dim_) + " features, got " + std::to_string(x.size()));
  }
  double total = 0.0;
  for (const auto& tree : trees_) total += path_length(tree, x);
  return total / static_cast<double>(trees_.size());
}

double IsolationForest::score(std::span<const double> x) const {
  return anomaly_score(mean_path_length(x), subsample_size_);
}

std::size_t IsolationForest::max_depth() const {
  std::size_t deepest = 0;
  for (const auto& tree : trees_) {
    for (const auto& node : tree) deepest = std::max<std::size_t>(deepest, node.depth);
  }
  return deepest;
}

}  // namespace iotchain::baselines
