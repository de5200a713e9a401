#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iotchain/core/features.hpp"

namespace iotchain::datagen {

/// One diagonal Gaussian in the benign mixture.
struct MixtureComponent {
  std::string name;
  double weight = 1.0;
  std::vector<double> mean;
  std::vector<double> variance;
};

/// Benign traffic of one device class: a Gaussian mixture over the feature
/// vector. Means scale by (1 + drift_rate * t) for row/tick index t.
struct BenignProfile {
  std::string name = "benign";
  std::vector<MixtureComponent> components;
  double drift_rate = 0.0;

  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }
  /// Mixture mean of each feature at t = 0.
  std::vector<double> mixture_mean() const;
  /// Mixture variance of each feature at t = 0.
  std::vector<double> mixture_variance() const;
  /// Throws Error(Errc::invalid_argument) unless weights sum to 1 and every
  /// variance is positive.
  void validate() const;
};

struct GroupInflation {
  FeatureGroup group = FeatureGroup::packet_rate;
  double factor = 1.0;
};

/// Mirai-like behavior: benign draws with selected feature groups multiplied by
/// `factor` and a mean-one log-normal jitter of shape `jitter`.
struct AttackProfile {
  std::string name;
  std::vector<GroupInflation> inflations;
  double jitter = 0.0;

  bool inflates(FeatureGroup group) const;
  double factor_for(FeatureGroup group) const;
  void validate() const;
};

/// Three activity states (idle, active, burst) over the 115 traffic features.
/// Parameters are fixed numbers derived from a seeded recipe so the profile is
/// identical everywhere.
BenignProfile default_benign_profile();

/// "mirai-flood": x20 on packet-rate and connection-count groups.
/// "mirai-scan": x8 on the connection-count group with port-entropy jitter.
AttackProfile attack_profile(std::string_view name);
const std::vector<std::string>& attack_names();

struct ProfileSet {
  BenignProfile benign;
  std::vector<AttackProfile> attacks;

  const AttackProfile& attack(std::string_view name) const;
};

ProfileSet default_profiles();

/// JSON config with every numeric parameter spelled out.
std::string profiles_to_json(const ProfileSet& profiles);
ProfileSet profiles_from_json(std::string_view text);
ProfileSet load_profiles(const std::filesystem::path& path);

}  // namespace iotchain::datagen
