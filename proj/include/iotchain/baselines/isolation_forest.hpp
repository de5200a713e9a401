#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iotchain/core/features.hpp"

namespace iotchain::baselines {

struct IForestConfig {
  std::size_t tree_count = 100;
  std::size_t subsample_size = 256;
  std::uint64_t seed = 0;
};

/// H(n) = 1 + 1/2 + ... + 1/n, exact summation.
double harmonic(std::size_t n);

/// Average unsuccessful-search path length of a BST on n points:
/// c(n) = 2H(n-1) - 2(n-1)/n, with c(0) = c(1) = 0. c(2) = 1.
double average_path_length(std::size_t n);

/// 2^(-mean_path / c(psi)).
double anomaly_score(double mean_path, std::size_t subsample_size);

class IsolationForest {
 public:
  /// Throws Error(Errc::invalid_argument) unless n >= subsample_size >= 2 and tree_count >= 1.
  static IsolationForest fit(std::span<const FeatureVector> data, const IForestConfig& config);

  /// Score in (0, 1); higher is more anomalous.
  double score(std::span<const double> x) const;
  /// Mean adjusted path length over all trees.
  double mean_path_length(std::span<const double> x) const;

  std::size_t tree_count() const { return trees_.size(); }
  std::size_t subsample_size() const { return subsample_size_; }
  std::size_t trained_size() const { return trained_size_; }
  /// ceil(log2(subsample_size)).
  std::size_t depth_cap() const { return depth_cap_; }
  /// Deepest node over all trees.
  std::size_t max_depth() const;

 private:
  struct Node {
    // Leaf when feature < 0.
    int feature = -1;
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;
    std::uint32_t depth = 0;
  };
  using Tree = std::vector<Node>;

  double path_length(const Tree& tree, std::span<const double> x) const;

  std::vector<Tree> trees_;
  std::size_t subsample_size_ = 0;
  std::size_t trained_size_ = 0;
  std::size_t depth_cap_ = 0;
  std::size_t dim_ = 0;
};

}  // namespace iotchain::baselines
