#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace iotchain {

/// Number of traffic statistics in one behavioral snapshot.
inline constexpr std::size_t kFeatureCount = 115;

using FeatureVector = std::vector<double>;

/// Coarse semantic grouping used by the traffic generators.
enum class FeatureGroup { packet_rate, packet_size, inter_arrival, connection_count };

const char* to_string(FeatureGroup group) noexcept;

/// Column names in dataset order: five stream aggregations (MI_dir, H, HH,
/// HH_jit, HpHp), each over the decay windows L5, L3, L1, L0.1, L0.01.
const std::vector<std::string>& feature_names();

FeatureGroup feature_group(std::size_t column);

bool all_finite(std::span<const double> values);

}  // namespace iotchain
