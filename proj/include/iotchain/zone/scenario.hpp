#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "iotchain/core/bytes.hpp"

namespace iotchain::zone {

// Line-oriented scenario script. Blank lines and text after '#' are ignored.
//   TICK n                      advance n ticks
//   REGISTER zone device        ticket + association (creates the zone)
//   SEND zone from to hex       one message with an explicit payload
//   INJECT zone device attack   switch the device's telemetry to an attack profile
struct ScenarioCommand {
  enum class Kind { tick, reg, send, inject };
  Kind kind = Kind::tick;
  std::size_t line = 0;
  std::uint64_t count = 0;
  std::string zone;
  std::string device;
  std::string to;
  std::string attack;
  Bytes payload;
};

struct Scenario {
  std::vector<ScenarioCommand> commands;
};

/// Throws Error(Errc::parse) with the offending line number.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace iotchain::zone
