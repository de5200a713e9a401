#include "iotchain/monitor/behavior_monitor.hpp"

#include <cstdio>
#include <ostream>

#include "iotchain/core/errors.hpp"

namespace iotchain::monitor {

void TrustConfig::validate() const {
  if (window < 1) throw Error(Errc::invalid_argument, "trust window must be at least 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(Errc::invalid_argument, "tau must lie in [0, 1]");
}

const char* to_string(TrustStatus status) noexcept {
  switch (status) {
    case TrustStatus::trusted: return "trusted";
    case TrustStatus::untrusted: return "untrusted";
    case TrustStatus::no_data: return "no-data";
  }
  return "unknown";
}

TrustWindow::TrustWindow(TrustConfig config) : config_(config) { config_.validate(); }

void TrustWindow::push(bool malicious) {
  labels_.push_back(malicious);
  if (malicious) ++malicious_;
  if (labels_.size() > config_.window) {
    if (labels_.front()) --malicious_;
    labels_.pop_front();
  }
}

ZoneTrust TrustWindow::level() const {
  ZoneTrust t;
  t.window = config_.window;
  t.tau = config_.tau;
  t.observed = labels_.size();
  t.malicious_count = malicious_;
  if (labels_.empty()) {
    t.trust = 1.0;
    t.status = TrustStatus::no_data;
    return t;
  }
  t.trust = 1.0 - static_cast<double>(malicious_) / static_cast<double>(labels_.size());
  t.status = t.trust >= config_.tau ? TrustStatus::trusted : TrustStatus::untrusted;
  return t;
}

BehaviorMonitor::BehaviorMonitor(TrustConfig trust) : window_(trust) {}

void BehaviorMonitor::set_detector(Detector detector) { detector_ = std::move(detector); }

const Detector& BehaviorMonitor::detector() const {
  if (!detector_) throw Error(Errc::not_trained, "behavior monitor has no trained detector");
  return *detector_;
}

MonitorEvent BehaviorMonitor::ingest(Snapshot snapshot) {
  if (!detector_) throw Error(Errc::not_trained, "behavior monitor has no trained detector");
  MonitorEvent event;
  event.record = store_.record(std::move(snapshot));
  const auto& stored = store_.by_seq(event.record.seq_id).snapshot;
  event.verdict = classify(*detector_, stored);
  window_.push(event.verdict.malicious());
  verdicts_.push_back(event.verdict);
  if (event.verdict.malicious()) {
    Alert alert{event.verdict.seq_id, event.verdict.device_id, event.record.payload_hash,
                event.verdict.mse,    event.verdict.threshold, event.verdict.tick};
    alerts_.push_back(alert);
    event.alert = std::move(alert);
  }
  return event;
}

std::vector<MonitorEvent> BehaviorMonitor::monitor_stream(std::span<const Snapshot> snapshots) {
  if (!detector_) throw Error(Errc::not_trained, "behavior monitor has no trained detector");
  std::vector<MonitorEvent> events;
  events.reserve(snapshots.size());
  for (const auto& s : snapshots) events.push_back(ingest(s));
  return events;
}

void BehaviorMonitor::note_sensor_rejection(const std::string& device_id) { ++hints_[device_id]; }

void write_verdict_log(std::ostream& out, std::span<const Verdict> verdicts, bool include_latency) {
  out << "seq_id,device_id,mse,threshold,label,tick,elapsed_micros\n";
  char buf[96];
  for (const auto& v : verdicts) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g", v.mse, v.threshold);
    out << v.seq_id << ',' << v.device_id << ',' << buf << ',' << to_string(v.label) << ',' << v.tick << ',';
    std::snprintf(buf, sizeof buf, "%.3f", include_latency ? v.elapsed_micros : 0.0);
    out << buf << '\n';
  }
}

void write_alert_log(std::ostream& out, std::span<const Alert> alerts) {
  out << "seq_id,device_id,hash_id,mse,threshold,tick\n";
  char buf[96];
  for (const auto& a : alerts) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g", a.mse, a.threshold);
    out << a.seq_id << ',' << a.device_id << ',' << a.hash_id.hex() << ',' << buf << ',' << a.tick << '\n';
  }
}

}  // namespace iotchain::monitor
