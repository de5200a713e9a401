#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotchain/core/features.hpp"
#include "iotchain/core/hash.hpp"
#include "iotchain/ledger/ledger.hpp"

namespace iotchain::monitor {

/// Opaque network identifiers carried alongside the features.
struct SnapshotMeta {
  std::string src_ip;
  std::string dst_ip;
  std::string mac;
  std::string port;

  bool operator==(const SnapshotMeta&) const = default;
};

/// One featurized observation of a device's traffic.
struct Snapshot {
  /// Assigned when stored; not part of the canonical bytes.
  std::uint64_t seq_id = 0;
  std::string device_id;
  FeatureVector features;
  SnapshotMeta meta;
  std::uint64_t tick = 0;

  /// device_id, tick, src_ip, dst_ip, mac, port, u32 feature count, f64 features.
  Bytes encode() const;
  /// Throws Error(Errc::decode) on malformed input.
  static Snapshot decode(ByteView data);
  core::Digest payload_hash() const { return core::hash(encode()); }

  bool operator==(const Snapshot&) const = default;
};

struct StoredSnapshot {
  Snapshot snapshot;
  Bytes bytes;
  /// Hash-ID recorded at storage time; the ledger's payload_hash for this snapshot.
  core::Digest hash_id;
};

struct RecordResult {
  std::uint64_t seq_id = 0;
  core::Digest payload_hash;
};

/// Off-chain raw snapshot store with the sequence-ID <-> hash-ID cross-reference.
class SnapshotStore {
 public:
  /// Assigns the next seq_id when snapshot.seq_id == 0, otherwise requires it to
  /// exceed every stored one. Throws Error(Errc::invalid_feature) for
  /// non-finite or wrongly sized features.
  RecordResult record(Snapshot snapshot);

  /// Throws Error(Errc::not_found).
  const StoredSnapshot& by_seq(std::uint64_t seq_id) const;
  const StoredSnapshot& by_hash(const core::Digest& hash_id) const;

  std::size_t size() const { return records_.size(); }
  const std::map<std::uint64_t, StoredSnapshot>& records() const { return records_; }
  std::uint64_t last_seq_id() const { return last_seq_id_; }

  /// Raw access for fault-injection tests.
  Bytes& raw_bytes(std::uint64_t seq_id);

 private:
  std::map<std::uint64_t, StoredSnapshot> records_;
  std::unordered_map<core::Digest, std::uint64_t, core::DigestHasher> by_hash_;
  std::uint64_t last_seq_id_ = 0;
};

struct AuditReport {
  std::size_t checked = 0;
  /// Stored snapshots with no sealed transaction (same seq_id and device).
  std::vector<std::uint64_t> orphans;
  /// Stored bytes no longer hash to the recorded hash-ID, or the sealed
  /// transaction appears more than once.
  std::vector<std::uint64_t> mismatched;

  bool clean() const { return orphans.empty() && mismatched.empty(); }
};

/// Cross-checks every stored snapshot against the sealed part of the ledger.
AuditReport audit(const SnapshotStore& store, const ledger::Ledger& ledger);

}  // namespace iotchain::monitor
