#pragma once

#include <span>
#include <vector>

#include "iotchain/core/features.hpp"

namespace iotchain::nn {

/// Per-feature z-score transform. Zero-variance features get std 1.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> mean, std::vector<double> stddev);

  /// Identity transform (mean 0, std 1) of the given width.
  static Normalizer identity(std::size_t dim);
  /// Population statistics of `rows`. Throws on empty input or ragged rows.
  static Normalizer fit(std::span<const FeatureVector> rows);

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return stddev_; }

  FeatureVector normalize(std::span<const double> x) const;
  FeatureVector denormalize(std::span<const double> z) const;
  std::vector<FeatureVector> normalize_all(std::span<const FeatureVector> rows) const;

  bool operator==(const Normalizer&) const = default;

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

}  // namespace iotchain::nn
