#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "iotchain/fusion/kalman.hpp"

namespace iotchain::fusion {

struct SensorSample {
  std::uint64_t tick = 0;
  std::string sensor_id;
  double value = 0.0;
};

struct TickVerdict {
  std::uint64_t tick = 0;
  FusionVerdict verdict;
};

/// GPS altitude, barometer and radar altimeter with typical noise levels.
std::map<std::string, SensorSpec> default_sensor_specs();

/// Reads `tick,sensor_id,value` rows (header required). Throws Error(Errc::parse)
/// naming the offending line.
std::vector<SensorSample> read_sensor_csv(std::istream& in);

struct FusionRunConfig {
  std::map<std::string, SensorSpec> sensors = default_sensor_specs();
  /// Process noise per tick on (position, velocity).
  Mat2 Q{{{0.01, 0.0}, {0.0, 0.01}}};
  double initial_position_variance = 100.0;
  double initial_velocity_variance = 10.0;
  FuseOptions options;
};

/// Groups samples by tick (in ascending tick order) and fuses each group. The
/// filter starts at the mean of the first tick's readings with zero velocity.
std::vector<TickVerdict> run_fusion(const std::vector<SensorSample>& samples, const FusionRunConfig& config);

/// `tick,position,velocity,accepted,rejected,coasting`; lists are ';'-separated,
/// rejected entries are `sensor:normalized_innovation`, with a trailing `:x`
/// when the cross-check isolated the sensor.
void write_verdict_csv(std::ostream& out, const std::vector<TickVerdict>& verdicts);

}  // namespace iotchain::fusion
