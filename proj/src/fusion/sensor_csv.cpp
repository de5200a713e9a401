#include "iotchain/fusion/sensor_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "iotchain/core/errors.hpp"

namespace iotchain::fusion {

std::map<std::string, SensorSpec> default_sensor_specs() {
  return {
      {"gps", {"gps", {1.0, 0.0}, 9.0, 0.01}},
      {"baro", {"baro", {1.0, 0.0}, 1.0, 0.01}},
      {"radar", {"radar", {1.0, 0.0}, 0.25, 0.01}},
  };
}

std::vector<SensorSample> read_sensor_csv(std::istream& in) {
  std::vector<SensorSample> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(Errc::parse, "sensor csv line " + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("missing header");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string tick, sensor, value;
    if (!std::getline(fields, tick, ',') || !std::getline(fields, sensor, ',') || !std::getline(fields, value)) {
      fail("expected tick,sensor_id,value");
    }
    SensorSample sample;
    sample.sensor_id = sensor;
    auto [p1, e1] = std::from_chars(tick.data(), tick.data() + tick.size(), sample.tick);
    if (e1 != std::errc{} || p1 != tick.data() + tick.size()) fail("bad tick '" + tick + "'");
    try {
      std::size_t used = 0;
      sample.value = std::stod(value, &used);
      if (used != value.size()) fail("bad value '" + value + "'");
    } catch (const std::logic_error&) {
      fail("bad value '" + value + "'");
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<TickVerdict> run_fusion(const std::vector<SensorSample>& samples, const FusionRunConfig& config) {
  std::vector<SensorSample> sorted = samples;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.tick < b.tick; });

  std::vector<TickVerdict> out;
  KalmanState state;
  bool initialized = false;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const auto tick = sorted[i].tick;
    std::vector<Reading> readings;
    for (; i < sorted.size() && sorted[i].tick == tick; ++i) {
      auto spec = config.sensors.find(sorted[i].sensor_id);
      if (spec == config.sensors.end()) {
        throw Error(Errc::invalid_argument, "no sensor spec for '" + sorted[i].sensor_id + "'");
      }
      readings.push_back({spec->second, sorted[i].value});
    }
    if (!initialized) {
      double sum = 0.0;
      for (const auto& r : readings) sum += r.value;
      state.x = {sum / static_cast<double>(readings.size()), 0.0};
      state.P = {{{config.initial_position_variance, 0.0}, {0.0, config.initial_velocity_variance}}};
      state.Q = config.Q;
      state.tick = tick;
      initialized = true;
    }
    auto [next, verdict] = fuse_step(state, readings, tick - state.tick, config.options);
    state = next;
    out.push_back({tick, std::move(verdict)});
  }
  return out;
}

void write_verdict_csv(std::ostream& out, const std::vector<TickVerdict>& verdicts) {
  out << "tick,position,velocity,accepted,rejected,coasting\n";
  char buf[64];
  for (const auto& [tick, v] : verdicts) {
    out << tick << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", v.fused_x[0], v.fused_x[1]);
    out << buf << ',';
    for (std::size_t k = 0; k < v.accepted.size(); ++k) out << (k ? ";" : "") << v.accepted[k];
    out << ',';
    for (std::size_t k = 0; k < v.rejected.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.4f", v.rejected[k].normalized_innovation);
      out << (k ? ";" : "") << v.rejected[k].sensor_id << ':' << buf << (v.rejected[k].inconsistent ? ":x" : "");
    }
    out << ',' << (v.coasting ? 1 : 0) << '\n';
  }
}

}  // namespace iotchain::fusion
