#include "iotchain/nn/normalizer.hpp"

#include <cmath>

#include "iotchain/core/errors.hpp"

namespace iotchain::nn {

Normalizer::Normalizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) {
    throw Error(Errc::dimension_mismatch, "normalizer mean/std widths differ");
  }
  for (double s : stddev_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::invalid_argument, "normalizer std must be positive");
  }
}

Normalizer Normalizer::identity(std::size_t dim) {
  return Normalizer(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

Normalizer Normalizer::fit(std::span<const FeatureVector> rows) {
  if (rows.empty()) throw Error(Errc::insufficient_data, "cannot fit a normalizer on zero rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& row : rows) {
    if (row.size() != dim) throw Error(Errc::dimension_mismatch, "ragged rows in normalizer fit");
    for (std::size_t j = 0; j < dim; ++j) mean[j] += row[j];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : mean) m /= n;

  std::vector<double> stddev(dim, 0.0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = row[j] - mean[j];
      stddev[j] += d * d;
    }
  }
  for (auto& s : stddev) {
    s = std::sqrt(s / n);
    if (!(s > 0.0)) s = 1.0;
  }
  return Normalizer(std::move(mean), std::move(stddev));
}

FeatureVector Normalizer::normalize(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw Error(Errc::dimension_mismatch,
                "expected " + std::to_string(dim()) + " features, got " + std::to_string(x.size()));
  }
  FeatureVector z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean_[j]) / stddev_[j];
  return z;
}

FeatureVector Normalizer::denormalize(std::span<const double> z) const {
  if (z.size() != dim()) {
    throw Error(Errc::dimension_mismatch,
                "expected " + std::to_string(dim()) + " features, got " + std::to_string(z.size()));
  }
  FeatureVector x(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) x[j] = z[j] * stddev_[j] + mean_[j];
  return x;
}

std::vector<FeatureVector> Normalizer::normalize_all(std::span<const FeatureVector> rows) const {
  std::vector<FeatureVector> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(normalize(row));
  return out;
}

}  // namespace iotchain::nn
