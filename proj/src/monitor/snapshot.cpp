#include "iotchain/monitor/snapshot.hpp"

#include "iotchain/core/errors.hpp"
#include "iotchain/core/serialize.hpp"

namespace iotchain::monitor {

Bytes Snapshot::encode() const {
  core::Writer out;
  out.str(device_id).u64(tick).str(meta.src_ip).str(meta.dst_ip).str(meta.mac).str(meta.port);
  out.u32(static_cast<std::uint32_t>(features.size()));
  for (double v : features) out.f64(v);
  return out.take();
}

Snapshot Snapshot::decode(ByteView data) {
  core::Reader in(data);
  Snapshot s;
  s.device_id = in.str();
  s.tick = in.u64();
  s.meta.src_ip = in.str();
  s.meta.dst_ip = in.str();
  s.meta.mac = in.str();
  s.meta.port = in.str();
  const auto n = in.u32();
  if (n != in.remaining() / 8 || in.remaining() % 8 != 0) {
    throw Error(Errc::decode, "snapshot feature count does not match record size");
  }
  s.features.resize(n);
  for (auto& v : s.features) v = in.f64();
  in.expect_done();
  return s;
}

RecordResult SnapshotStore::record(Snapshot snapshot) {
  if (snapshot.features.size() != kFeatureCount) {
    throw Error(Errc::invalid_feature, "snapshot has " + std::to_string(snapshot.features.size()) +
                                           " features, expected " + std::to_string(kFeatureCount));
  }
  if (!all_finite(snapshot.features)) throw Error(Errc::invalid_feature, "snapshot has a non-finite feature");
  if (snapshot.seq_id == 0) {
    snapshot.seq_id = last_seq_id_ + 1;
  } else if (snapshot.seq_id <= last_seq_id_) {
    throw Error(Errc::invalid_argument, "seq_id " + std::to_string(snapshot.seq_id) + " is not above " +
                                            std::to_string(last_seq_id_));
  }

  StoredSnapshot stored;
  stored.bytes = snapshot.encode();
  stored.hash_id = core::hash(stored.bytes);
  stored.snapshot = std::move(snapshot);
  const RecordResult result{stored.snapshot.seq_id, stored.hash_id};

  last_seq_id_ = result.seq_id;
  by_hash_.try_emplace(result.payload_hash, result.seq_id);
  records_.emplace(result.seq_id, std::move(stored));
  return result;
}

const StoredSnapshot& SnapshotStore::by_seq(std::uint64_t seq_id) const {
  auto it = records_.find(seq_id);
  if (it == records_.end()) throw Error(Errc::not_found, "no snapshot with seq_id " + std::to_string(seq_id));
  return it->second;
}

const StoredSnapshot& SnapshotStore::by_hash(const core::Digest& hash_id) const {
  auto it = by_hash_.find(hash_id);
  if (it == by_hash_.end()) throw Error(Errc::not_found, "no snapshot with hash-id " + hash_id.hex());
  return records_.at(it->second);
}

Bytes& SnapshotStore::raw_bytes(std::uint64_t seq_id) {
  auto it = records_.find(seq_id);
  if (it == records_.end()) throw Error(Errc::not_found, "no snapshot with seq_id " + std::to_string(seq_id));
  return it->second.bytes;
}

AuditReport audit(const SnapshotStore& store, const ledger::Ledger& ledger) {
  AuditReport report;
  for (const auto& [seq, stored] : store.records()) {
    ++report.checked;
    if (core::hash(stored.bytes) != stored.hash_id) {
      report.mismatched.push_back(seq);
      continue;
    }
    std::size_t matches = 0;
    for (const auto& loc : ledger.locations(stored.hash_id)) {
      const auto& tx = ledger.blocks()[loc.height].transactions[loc.position];
      if (tx.seq_id == seq && tx.device_id == stored.snapshot.device_id) ++matches;
    }
    if (matches == 0) {
      report.orphans.push_back(seq);
    } else if (matches > 1) {
      report.mismatched.push_back(seq);
    }
  }
  return report;
}

}  // namespace iotchain::monitor
