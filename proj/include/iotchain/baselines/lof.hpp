#pragma once

#include <span>
#include <vector>

#include "iotchain/core/features.hpp"
#include "iotchain/nn/normalizer.hpp"

namespace iotchain::baselines {

/// Reachability distances below this are clamped to keep densities finite.
inline constexpr double kMinReachDistance = 1e-12;

/// Local Outlier Factor over z-scored features with brute-force neighbor search.
class LofModel {
 public:
  /// Throws Error(Errc::invalid_argument) unless 1 <= k < n.
  static LofModel fit(std::span<const FeatureVector> data, std::size_t k = 20, bool standardize = true);

  /// LOF of a query point against the training set. Values near 1 are inliers.
  double score(std::span<const double> x) const;
  /// LOF of training point i with itself excluded from its neighborhood.
  double training_score(std::size_t i) const;

  std::size_t k() const { return k_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<double>& k_distances() const { return k_distance_; }
  const std::vector<double>& densities() const { return lrd_; }

 private:
  struct Neighbor {
    double distance;
    std::size_t index;
  };
  std::vector<Neighbor> neighbors(std::span<const double> z, std::size_t exclude) const;
  double density(const std::vector<Neighbor>& hood) const;
  double ratio(const std::vector<Neighbor>& hood) const;

  std::vector<FeatureVector> points_;
  nn::Normalizer normalizer_;
  std::size_t k_ = 0;
  std::vector<double> k_distance_;
  std::vector<double> lrd_;
};

}  // namespace iotchain::baselines
