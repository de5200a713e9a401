#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotchain/monitor/detector.hpp"
#include "iotchain/monitor/snapshot.hpp"

namespace iotchain::monitor {

struct TrustConfig {
  std::size_t window = 1000;
  double tau = 0.95;

  void validate() const;
};

enum class TrustStatus { trusted, untrusted, no_data };

const char* to_string(TrustStatus status) noexcept;

struct ZoneTrust {
  std::size_t window = 0;
  std::size_t observed = 0;
  std::size_t malicious_count = 0;
  double trust = 1.0;
  double tau = 0.95;
  TrustStatus status = TrustStatus::no_data;
};

/// Sliding window over the last W verdict labels.
class TrustWindow {
 public:
  explicit TrustWindow(TrustConfig config = {});

  void push(bool malicious);
  /// trust = 1 - malicious / min(W, observed); trusted iff trust >= tau.
  ZoneTrust level() const;

 private:
  TrustConfig config_;
  std::deque<bool> labels_;
  std::size_t malicious_ = 0;
};

struct Alert {
  std::uint64_t seq_id = 0;
  std::string device_id;
  core::Digest hash_id;
  double mse = 0.0;
  double threshold = 0.0;
  std::uint64_t tick = 0;
};

struct MonitorEvent {
  RecordResult record;
  Verdict verdict;
  std::optional<Alert> alert;
};

/// Per-zone Behavior Monitor: stores snapshots, classifies them and keeps the
/// zone's trust window. Single owner.
class BehaviorMonitor {
 public:
  explicit BehaviorMonitor(TrustConfig trust = {});

  void set_detector(Detector detector);
  bool trained() const { return detector_.has_value(); }
  const Detector& detector() const;

  /// Records, classifies and updates trust. Throws Error(Errc::not_trained)
  /// before anything is stored if no detector is set.
  MonitorEvent ingest(Snapshot snapshot);
  std::vector<MonitorEvent> monitor_stream(std::span<const Snapshot> snapshots);

  ZoneTrust trust_level() const { return window_.level(); }

  /// Sensor gating rejections reported for a device. They are surfaced in zone
  /// status but never change a verdict.
  void note_sensor_rejection(const std::string& device_id);
  const std::map<std::string, std::uint64_t>& anomaly_hints() const { return hints_; }

  SnapshotStore& store() { return store_; }
  const SnapshotStore& store() const { return store_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::vector<Alert>& alerts() const { return alerts_; }

 private:
  std::optional<Detector> detector_;
  SnapshotStore store_;
  TrustWindow window_;
  std::vector<Verdict> verdicts_;
  std::vector<Alert> alerts_;
  std::map<std::string, std::uint64_t> hints_;
};

/// `seq_id,device_id,mse,threshold,label,tick,elapsed_micros`. With
/// include_latency = false the last column is written as 0.
void write_verdict_log(std::ostream& out, std::span<const Verdict> verdicts, bool include_latency = true);

/// `seq_id,device_id,hash_id,mse,threshold,tick`.
void write_alert_log(std::ostream& out, std::span<const Alert> alerts);

}  // namespace iotchain::monitor
