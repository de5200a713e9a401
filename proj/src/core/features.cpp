#include "iotchain/core/features.hpp"

#include <array>
#include <cmath>

#include "iotchain/core/errors.hpp"

namespace iotchain {

namespace {

struct StreamLayout {
  const char* prefix;
  std::vector<const char*> stats;
};

const std::array<const char*, 5> kWindows = {"L5", "L3", "L1", "L0.1", "L0.01"};

const std::vector<StreamLayout>& layout() {
  static const std::vector<StreamLayout> streams = {
      {"MI_dir", {"weight", "mean", "variance"}},
      {"H", {"weight", "mean", "variance"}},
      {"HH", {"weight", "mean", "std", "magnitude", "radius", "covariance", "pcc"}},
      {"HH_jit", {"weight", "mean", "variance"}},
      {"HpHp", {"weight", "mean", "std", "magnitude", "radius", "covariance", "pcc"}},
  };
  return streams;
}

std::vector<FeatureGroup> build_groups() {
  std::vector<FeatureGroup> groups;
  for (const auto& stream : layout()) {
    const std::string prefix = stream.prefix;
    for (std::size_t w = 0; w < kWindows.size(); ++w) {
      for (const std::string stat : stream.stats) {
        if (prefix == "HpHp") {
          groups.push_back(FeatureGroup::connection_count);
        } else if (prefix == "HH_jit") {
          groups.push_back(FeatureGroup::inter_arrival);
        } else if (stat == "weight") {
          groups.push_back(FeatureGroup::packet_rate);
        } else {
          groups.push_back(FeatureGroup::packet_size);
        }
      }
    }
  }
  return groups;
}

}  // namespace

const char* to_string(FeatureGroup group) noexcept {
  switch (group) {
    case FeatureGroup::packet_rate: return "packet-rate";
    case FeatureGroup::packet_size: return "packet-size";
    case FeatureGroup::inter_arrival: return "inter-arrival";
    case FeatureGroup::connection_count: return "connection-count";
  }
  return "unknown";
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& stream : layout()) {
      for (const char* window : kWindows) {
        for (const char* stat : stream.stats) {
          out.push_back(std::string(stream.prefix) + "_" + window + "_" + stat);
        }
      }
    }
    return out;
  }();
  return names;
}

FeatureGroup feature_group(std::size_t column) {
  static const std::vector<FeatureGroup> groups = build_groups();
  if (column >= groups.size()) {
    throw Error(Errc::invalid_argument, "feature column " + std::to_string(column) + " out of range");
  }
  return groups[column];
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace iotchain
