#include "iotchain/baselines/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iotchain/core/errors.hpp"

namespace iotchain::baselines {

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

LofModel LofModel::fit(std::span<const FeatureVector> data, std::size_t k, bool standardize) {
  if (k < 1 || k >= data.size()) {
    throw Error(Errc::invalid_argument,
                "lof needs 1 <= k < n (k = " + std::to_string(k) + ", n = " + std::to_string(data.size()) + ")");
  }
  LofModel model;
  model.k_ = k;
  model.normalizer_ = standardize ? nn::Normalizer::fit(data) : nn::Normalizer::identity(data.front().size());
  model.points_ = model.normalizer_.normalize_all(data);

  const std::size_t n = data.size();
  std::vector<std::vector<Neighbor>> hoods(n);
  model.k_distance_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    hoods[i] = model.neighbors(model.points_[i], i);
    model.k_distance_[i] = hoods[i].back().distance;
  }
  model.lrd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) model.lrd_[i] = model.density(hoods[i]);
  return model;
}

std::vector<LofModel::Neighbor> LofModel::neighbors(std::span<const double> z, std::size_t exclude) const {
  std::vector<Neighbor> all;
  all.reserve(points_.size());
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (j != exclude) all.push_back({distance(z, points_[j]), j});
  }
  const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k_), all.end(), by_distance);
  all.resize(k_);
  return all;
}

double LofModel::density(const std::vector<Neighbor>& hood) const {
  double reach = 0.0;
  for (const auto& nb : hood) {
    reach += std::max({k_distance_[nb.index], nb.distance, kMinReachDistance});
  }
  return static_cast<double>(hood.size()) / reach;
}

double LofModel::ratio(const std::vector<Neighbor>& hood) const {
  double sum = 0.0;
  for (const auto& nb : hood) sum += lrd_[nb.index];
  return sum / static_cast<double>(hood.size()) / density(hood);
}

double LofModel::score(std::span<const double> x) const {
  if (x.size() != normalizer_.dim()) {
    throw Error(Errc::dimension_mismatch,
                "lof expects " + std::to_string(normalizer_.dim()) + " features, got " + std::to_string(x.size()));
  }
  const auto z = normalizer_.normalize(x);
  return ratio(neighbors(z, std::numeric_limits<std::size_t>::max()));
}

double LofModel::training_score(std::size_t i) const {
  if (i >= points_.size()) throw Error(Errc::not_found, "lof training index out of range");
  return ratio(neighbors(points_[i], i));
}

}  // namespace iotchain::baselines
