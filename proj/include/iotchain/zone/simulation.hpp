#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotchain/datagen/profiles.hpp"
#include "iotchain/monitor/detector.hpp"
#include "iotchain/zone/scenario.hpp"
#include "iotchain/zone/transport.hpp"
#include "iotchain/zone/zone.hpp"

namespace iotchain::zone {

struct SimulationConfig {
  std::uint64_t seed = 7;
  ZoneConfig zone;
  FaultModel faults;
  datagen::ProfileSet profiles = datagen::default_profiles();
  /// Benign rows collected for the shared detector when none is supplied.
  std::size_t training_rows = 1500;
  monitor::FitConfig fit;
  /// A pre-trained detector installed in every zone instead of fitting one.
  std::optional<monitor::Detector> detector;
};

/// Drives zones through a scenario. Every tick each active device, masters
/// included, sends one telemetry snapshot to its master through the transport;
/// due messages are then routed.
class Simulation {
 public:
  explicit Simulation(SimulationConfig config);

  /// Executes the commands in order. Runtime errors name the scenario line.
  void run(const Scenario& scenario);
  /// Delivers everything still in flight and seals pending transactions.
  void finish();

  std::uint64_t tick() const { return tick_; }
  const std::map<std::string, Zone>& zones() const { return zones_; }
  const Zone& zone(const std::string& name) const;
  const std::vector<std::string>& events() const { return events_; }
  const Transport& transport() const { return transport_; }
  /// Fits the shared detector on first use.
  const monitor::Detector& detector();

  /// Writes ledgers/<zone>.ledger, verdicts/<zone>.csv, alerts/<zone>.csv,
  /// zone_status.csv and events.log under `dir`. Returns the files written.
  std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir,
                                                     bool include_latency = true) const;

 private:
  struct Device {
    core::KeyPair keys;
    core::Rng telemetry;
    std::string ip;
    std::string mac;
    std::optional<std::string> attack;
  };

  Zone& ensure_zone(const std::string& name);
  Device& device(const std::string& zone, const std::string& id);
  void register_device(const ScenarioCommand& cmd);
  void send(const std::string& zone, const std::string& from, const std::string& to, Bytes payload);
  void step();
  void route(std::vector<Envelope> envelopes);
  void log(const std::string& line);

  SimulationConfig config_;
  core::Rng root_;
  Transport transport_;
  std::optional<monitor::Detector> detector_;
  std::map<std::string, Zone> zones_;
  std::map<std::string, std::map<std::string, Device>> devices_;
  std::vector<std::string> events_;
  std::uint64_t tick_ = 0;
};

/// `zone,group_id,status,trust,observed,malicious,window,tau,ledger_height,active,pending,delivered,rejected,unmonitored,sensor_hints,audit_orphans,audit_mismatched,chain_ok`.
void write_zone_status(std::ostream& out, const std::map<std::string, Zone>& zones);

}  // namespace iotchain::zone
