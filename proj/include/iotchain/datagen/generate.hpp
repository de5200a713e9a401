#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iotchain/core/features.hpp"
#include "iotchain/core/rng.hpp"
#include "iotchain/datagen/profiles.hpp"

namespace iotchain::datagen {

enum class Label { benign, malicious };

const char* to_string(Label label) noexcept;

struct LabeledDataset {
  std::vector<FeatureVector> rows;
  std::vector<Label> labels;
  std::vector<std::string> device_ids;

  std::size_t size() const { return rows.size(); }
  void append(const LabeledDataset& other);
  std::size_t count(Label label) const;
  /// Throws Error(Errc::format) if the parallel arrays disagree in length.
  void validate() const;
};

/// One benign draw at row/tick index t.
FeatureVector sample_benign(const BenignProfile& profile, core::Rng& rng, std::uint64_t t);
/// One benign draw with the attack's groups inflated.
FeatureVector sample_attack(const AttackProfile& attack, const BenignProfile& base, core::Rng& rng,
                            std::uint64_t t);

LabeledDataset gen_benign(const BenignProfile& profile, std::size_t n, std::uint64_t seed,
                          const std::string& device_id = "device-0");
LabeledDataset gen_attack(const AttackProfile& attack, const BenignProfile& base, std::size_t n,
                          std::uint64_t seed, const std::string& device_id = "device-0");

/// Seeded shuffle, then the first floor(n * ratio) rows form the first part.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset, double ratio, std::uint64_t seed);

}  // namespace iotchain::datagen
