#include "iotchain/zone/simulation.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/datagen/generate.hpp"
#include "iotchain/ledger/ledger_file.hpp"
#include "iotchain/monitor/snapshot.hpp"

namespace iotchain::zone {

namespace {

constexpr const char* kMasterId = "master";

}  // namespace

Simulation::Simulation(SimulationConfig config)
    : config_(std::move(config)),
      root_(config_.seed),
      transport_(config_.faults, root_.fork("transport")),
      detector_(std::move(config_.detector)) {
  config_.zone.trust.validate();
  config_.profiles.benign.validate();
  if (config_.zone.blocksize == 0) throw Error(Errc::invalid_argument, "blocksize must be at least 1");
}

const monitor::Detector& Simulation::detector() {
  if (!detector_) {
    auto rows = datagen::gen_benign(config_.profiles.benign, config_.training_rows, root_.fork("training").next_u64());
    detector_ = monitor::fit(rows.rows, config_.fit);
  }
  return *detector_;
}

const Zone& Simulation::zone(const std::string& name) const {
  const auto it = zones_.find(name);
  if (it == zones_.end()) throw Error(Errc::not_found, "no zone named '" + name + "'");
  return it->second;
}

void Simulation::log(const std::string& line) { events_.push_back("tick=" + std::to_string(tick_) + " " + line); }

Simulation::Device& Simulation::device(const std::string& zone, const std::string& id) {
  auto& in_zone = devices_[zone];
  auto it = in_zone.find(id);
  if (it == in_zone.end()) {
    auto key_rng = root_.fork("keys/" + zone + "/" + id);
    const auto zone_index = devices_.size();
    const auto dev_index = in_zone.size() + 1;
    char mac[32];
    std::snprintf(mac, sizeof mac, "02:00:00:00:%02zx:%02zx", zone_index % 256, dev_index % 256);
    Device d{core::keygen(key_rng), root_.fork("telemetry/" + zone + "/" + id),
             "10.0." + std::to_string(zone_index) + "." + std::to_string(dev_index), mac, std::nullopt};
    it = in_zone.emplace(id, std::move(d)).first;
  }
  return it->second;
}

Zone& Simulation::ensure_zone(const std::string& name) {
  auto it = zones_.find(name);
  if (it == zones_.end()) {
    auto& master = device(name, kMasterId);
    it = zones_.try_emplace(name, name, master.keys, kMasterId, config_.zone).first;
    it->second.monitor().set_detector(detector());
    log("zone=" + name + " event=create group_id=" + it->second.group_id().hex());
  }
  return it->second;
}

void Simulation::register_device(const ScenarioCommand& cmd) {
  auto& zone = ensure_zone(cmd.zone);
  auto& dev = device(cmd.zone, cmd.device);
  Ticket ticket;
  try {
    ticket = zone.issue_ticket(cmd.device, dev.keys.public_key, tick_);
  } catch (const Error& e) {
    throw Error(e.code(), "scenario line " + std::to_string(cmd.line) + ": " + e.what());
  }
  auto nonce_rng = root_.fork("nonce/" + cmd.zone + "/" + cmd.device);
  const auto request = make_association_request(ticket, nonce_rng.next_u64(), dev.keys.secret_key);
  const auto result = zone.associate(request, tick_);
  log("zone=" + cmd.zone + " event=register device=" + cmd.device + " result=" + to_string(result.status));
}

void Simulation::send(const std::string& zone_name, const std::string& from, const std::string& to, Bytes payload) {
  auto& zone = zones_.at(zone_name);
  auto& sender = device(zone_name, from);
  const auto seq = zone.reserve_seq_id();
  transport_.send(zone_name, make_message(from, to, std::move(payload), seq, tick_, sender.keys.secret_key), tick_);
}

void Simulation::route(std::vector<Envelope> envelopes) {
  for (auto& env : envelopes) {
    auto& zone = zones_.at(env.zone);
    const auto result = zone.route_message(env.message);
    if (!result.delivered()) {
      log("zone=" + env.zone + " event=route seq=" + std::to_string(env.message.seq_id) + " from=" +
          env.message.from + " result=" + to_string(result.status));
    } else if (result.event && result.event->alert) {
      const auto& alert = *result.event->alert;
      char mse[64];
      std::snprintf(mse, sizeof mse, "%.6g", alert.mse);
      log("zone=" + env.zone + " event=alert seq=" + std::to_string(alert.seq_id) + " device=" + alert.device_id +
          " mse=" + mse);
    }
  }
}

void Simulation::step() {
  ++tick_;
  for (auto& [name, zone] : zones_) {
    for (const auto& [id, record] : zone.devices()) {
      if (!record.active) continue;
      auto& dev = device(name, id);
      monitor::Snapshot snap;
      snap.device_id = id;
      snap.tick = tick_;
      snap.meta = {dev.ip, devices_[name].at(kMasterId).ip, dev.mac, "0"};
      snap.features = dev.attack ? datagen::sample_attack(config_.profiles.attack(*dev.attack),
                                                          config_.profiles.benign, dev.telemetry, tick_)
                                 : datagen::sample_benign(config_.profiles.benign, dev.telemetry, tick_);
      send(name, id, zone.master_id(), snap.encode());
    }
  }
  route(transport_.deliver(tick_));
}

void Simulation::run(const Scenario& scenario) {
  for (const auto& cmd : scenario.commands) {
    switch (cmd.kind) {
      case ScenarioCommand::Kind::tick:
        for (std::uint64_t i = 0; i < cmd.count; ++i) step();
        break;
      case ScenarioCommand::Kind::reg:
        register_device(cmd);
        break;
      case ScenarioCommand::Kind::send:
        if (!zones_.contains(cmd.zone)) {
          throw Error(Errc::not_found, "scenario line " + std::to_string(cmd.line) + ": unknown zone '" + cmd.zone + "'");
        }
        send(cmd.zone, cmd.device, cmd.to, cmd.payload);
        break;
      case ScenarioCommand::Kind::inject: {
        if (!zones_.contains(cmd.zone) || !zones_.at(cmd.zone).devices().contains(cmd.device)) {
          throw Error(Errc::not_found, "scenario line " + std::to_string(cmd.line) + ": device '" + cmd.device +
                                           "' is not registered in zone '" + cmd.zone + "'");
        }
        device(cmd.zone, cmd.device).attack = cmd.attack;
        log("zone=" + cmd.zone + " event=inject device=" + cmd.device + " attack=" + cmd.attack);
        break;
      }
    }
  }
}

void Simulation::finish() {
  route(transport_.drain());
  for (auto& [name, zone] : zones_) zone.ledger().flush();
  for (const auto& [name, zone] : zones_) {
    const auto t = zone.status().trust;
    char trust[32];
    std::snprintf(trust, sizeof trust, "%.4f", t.trust);
    log("zone=" + name + " event=status trust=" + trust + " status=" + monitor::to_string(t.status));
  }
}

void write_zone_status(std::ostream& out, const std::map<std::string, Zone>& zones) {
  out << "zone,group_id,status,trust,observed,malicious,window,tau,ledger_height,active,pending,delivered,rejected,"
         "unmonitored,sensor_hints,audit_orphans,audit_mismatched,chain_ok\n";
  for (const auto& [name, zone] : zones) {
    const auto s = zone.status();
    const auto audit = monitor::audit(zone.monitor().store(), zone.ledger());
    std::uint64_t hints = 0;
    for (const auto& [dev, n] : s.sensor_hints) hints += n;
    char nums[64];
    std::snprintf(nums, sizeof nums, "%.6f", s.trust.trust);
    out << name << ',' << s.group_id.hex() << ',' << monitor::to_string(s.trust.status) << ',' << nums << ','
        << s.trust.observed << ',' << s.trust.malicious_count << ',' << s.trust.window << ',';
    std::snprintf(nums, sizeof nums, "%.4g", s.trust.tau);
    out << nums << ',' << s.ledger_height << ',' << s.active << ',' << s.pending << ',' << s.delivered << ','
        << s.rejected << ',' << s.unmonitored << ',' << hints << ',' << audit.orphans.size() << ','
        << audit.mismatched.size() << ',' << (zone.ledger().verify_chain().ok() ? "true" : "false") << '\n';
  }
}

std::vector<std::filesystem::path> Simulation::write_artifacts(const std::filesystem::path& dir,
                                                               bool include_latency) const {
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::filesystem::path& path, const std::string& text) {
    core::write_text(path, text);
    written.push_back(path);
  };
  for (const auto& [name, zone] : zones_) {
    emit(dir / "ledgers" / (name + ".ledger"), ledger::export_ledger(zone.ledger()));
    std::ostringstream verdicts;
    monitor::write_verdict_log(verdicts, zone.monitor().verdicts(), include_latency);
    emit(dir / "verdicts" / (name + ".csv"), verdicts.str());
    std::ostringstream alerts;
    monitor::write_alert_log(alerts, zone.monitor().alerts());
    emit(dir / "alerts" / (name + ".csv"), alerts.str());
  }
  std::ostringstream status;
  write_zone_status(status, zones_);
  emit(dir / "zone_status.csv", status.str());
  std::string events;
  for (const auto& e : events_) events += e + '\n';
  emit(dir / "events.log", events);
  return written;
}

}  // namespace iotchain::zone
