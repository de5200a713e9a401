#include "iotchain/datagen/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iotchain/core/errors.hpp"

namespace iotchain::datagen {

const char* to_string(Label label) noexcept { return label == Label::benign ? "benign" : "malicious"; }

void LabeledDataset::append(const LabeledDataset& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  device_ids.insert(device_ids.end(), other.device_ids.begin(), other.device_ids.end());
}

std::size_t LabeledDataset::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
  if (labels.size() != rows.size() || device_ids.size() != rows.size()) {
    throw Error(Errc::format, "dataset rows, labels and device ids differ in length");
  }
}

FeatureVector sample_benign(const BenignProfile& profile, core::Rng& rng, std::uint64_t t) {
  const double u = rng.uniform();
  std::size_t k = 0;
  double cumulative = profile.components[0].weight;
  while (u >= cumulative && k + 1 < profile.components.size()) cumulative += profile.components[++k].weight;

  const auto& comp = profile.components[k];
  const double drift = 1.0 + profile.drift_rate * static_cast<double>(t);
  FeatureVector x(comp.mean.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = comp.mean[j] * drift + std::sqrt(comp.variance[j]) * rng.normal();
  return x;
}

FeatureVector sample_attack(const AttackProfile& attack, const BenignProfile& base, core::Rng& rng,
                            std::uint64_t t) {
  FeatureVector x = sample_benign(base, rng, t);
  const double s = attack.jitter;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto group = feature_group(j);
    if (!attack.inflates(group)) continue;
    const double jitter = s > 0.0 ? std::exp(s * rng.normal() - 0.5 * s * s) : 1.0;
    x[j] *= attack.factor_for(group) * jitter;
  }
  return x;
}

LabeledDataset gen_benign(const BenignProfile& profile, std::size_t n, std::uint64_t seed,
                          const std::string& device_id) {
  profile.validate();
  if (n < 1) throw Error(Errc::invalid_argument, "need at least one row");
  core::Rng rng(seed);
  LabeledDataset out;
  for (std::size_t i = 0; i < n; ++i) {
    out.rows.push_back(sample_benign(profile, rng, i));
    out.labels.push_back(Label::benign);
    out.device_ids.push_back(device_id);
  }
  return out;
}

LabeledDataset gen_attack(const AttackProfile& attack, const BenignProfile& base, std::size_t n,
                          std::uint64_t seed, const std::string& device_id) {
  attack.validate();
  base.validate();
  if (n < 1) throw Error(Errc::invalid_argument, "need at least one row");
  core::Rng rng(seed);
  LabeledDataset out;
  for (std::size_t i = 0; i < n; ++i) {
    out.rows.push_back(sample_attack(attack, base, rng, i));
    out.labels.push_back(Label::malicious);
    out.device_ids.push_back(device_id);
  }
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(Errc::invalid_argument, "split ratio must lie in (0, 1)");
  if (dataset.size() == 0) throw Error(Errc::insufficient_data, "cannot split an empty dataset");
  dataset.validate();

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  core::Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  // The epsilon keeps ratios like 2/3 from losing a row to rounding.
  const auto first_size = static_cast<std::size_t>(std::floor(static_cast<double>(dataset.size()) * ratio + 1e-9));
  std::pair<LabeledDataset, LabeledDataset> parts;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& part = k < first_size ? parts.first : parts.second;
    const auto i = order[k];
    part.rows.push_back(dataset.rows[i]);
    part.labels.push_back(dataset.labels[i]);
    part.device_ids.push_back(dataset.device_ids[i]);
  }
  return parts;
}

}  // namespace iotchain::datagen
