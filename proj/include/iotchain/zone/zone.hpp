#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iotchain/core/hash.hpp"
#include "iotchain/core/serialize.hpp"
#include "iotchain/core/signature.hpp"
#include "iotchain/ledger/ledger.hpp"
#include "iotchain/monitor/behavior_monitor.hpp"

namespace iotchain::zone {

/// Master-signed credential naming a follower and its key.
struct Ticket {
  core::Digest group_id;
  std::string follower_id;
  core::PublicKey follower_pubkey;
  std::uint64_t issued_at = 0;
  core::Signature master_signature;

  /// group_id, follower_id, follower_pubkey (32 bytes), issued_at.
  Bytes signing_bytes() const;
  /// signing_bytes followed by the 64-byte master signature.
  Bytes encode() const;
  void encode_to(core::Writer& out) const;
  static Ticket decode(core::Reader& in);

  bool operator==(const Ticket&) const = default;
};

bool verify_ticket(const Ticket& ticket, const core::PublicKey& master_key);

struct AssociationRequest {
  Ticket ticket;
  std::uint64_t nonce = 0;
  core::Signature follower_signature;

  /// Encoded ticket followed by the nonce.
  Bytes signing_bytes() const;
  Bytes encode() const;
  static AssociationRequest decode(ByteView data);

  bool operator==(const AssociationRequest&) const = default;
};

AssociationRequest make_association_request(const Ticket& ticket, std::uint64_t nonce,
                                            const core::SecretKey& follower_key);

/// A routed message. The signature is the sender's transaction signature over
/// (seq_id, from, hash(payload), timestamp), so the ledger can check it as-is.
struct Message {
  std::string from;
  std::string to;
  Bytes payload;
  std::uint64_t seq_id = 0;
  std::uint64_t timestamp = 0;
  core::Signature signature;
};

Message make_message(std::string from, std::string to, Bytes payload, std::uint64_t seq_id, std::uint64_t timestamp,
                     const core::SecretKey& sender_key);

enum class AssociationStatus { accepted, integrity, ticket, replay, foreign_ticket };
const char* to_string(AssociationStatus status) noexcept;

struct AssociationResult {
  AssociationStatus status = AssociationStatus::accepted;
  std::uint64_t seq_id = 0;
  bool accepted() const { return status == AssociationStatus::accepted; }
};

enum class RouteStatus { delivered, unknown_device, invalid_signature, replay };
const char* to_string(RouteStatus status) noexcept;

struct RouteResult {
  RouteStatus status = RouteStatus::delivered;
  /// Set when the payload decoded as a snapshot and reached the monitor.
  std::optional<monitor::MonitorEvent> event;
  bool delivered() const { return status == RouteStatus::delivered; }
};

struct DeviceRecord {
  std::string id;
  core::PublicKey public_key;
  bool active = false;
};

struct ZoneConfig {
  std::size_t blocksize = ledger::Ledger::kDefaultBlocksize;
  monitor::TrustConfig trust;
};

struct ZoneStatus {
  std::string label;
  core::Digest group_id;
  monitor::ZoneTrust trust;
  std::uint64_t ledger_height = 0;
  std::size_t pending = 0;
  std::size_t active = 0;
  std::size_t delivered = 0;
  std::size_t rejected = 0;
  std::size_t unmonitored = 0;
  std::map<std::string, std::uint64_t> sensor_hints;
};

/// One use-case zone: a master, its followers, a ledger and a behavior monitor.
/// The master counts as an active device and its own traffic is monitored.
class Zone {
 public:
  Zone(std::string label, core::KeyPair master_keys, std::string master_id = "master", ZoneConfig config = {});

  /// hash(master public key || label).
  static core::Digest derive_group_id(const core::PublicKey& master_key, std::string_view label);

  const std::string& label() const { return label_; }
  const core::Digest& group_id() const { return group_id_; }
  const std::string& master_id() const { return master_id_; }
  const core::PublicKey& master_public_key() const { return master_keys_.public_key; }

  /// Records the follower as pending. Throws Error(Errc::already_registered)
  /// for a known id, including the master's.
  Ticket issue_ticket(const std::string& follower_id, const core::PublicKey& follower_key, std::uint64_t tick);

  /// Checks, in order: follower signature (integrity), group_id
  /// (foreign_ticket), master signature and issued record (ticket), nonce
  /// (replay). On success a master-signed transaction carrying
  /// hash(request bytes) is submitted and the follower becomes active.
  AssociationResult associate(const AssociationRequest& request, std::uint64_t tick);

  /// Next zone-wide sequence number for an outgoing transaction.
  std::uint64_t reserve_seq_id() { return ++next_seq_id_; }

  /// Submits the message's transaction and, once accepted, delivers the payload
  /// to the recipient's inbox. Payloads that decode as snapshots are recorded
  /// and classified under the transaction's seq_id.
  RouteResult route_message(const Message& message);

  bool is_active(const std::string& device_id) const;
  const std::vector<Bytes>& inbox(const std::string& device_id) const;
  const std::map<std::string, DeviceRecord>& devices() const { return devices_; }

  ZoneStatus status() const;

  ledger::Ledger& ledger() { return ledger_; }
  const ledger::Ledger& ledger() const { return ledger_; }
  monitor::BehaviorMonitor& monitor() { return monitor_; }
  const monitor::BehaviorMonitor& monitor() const { return monitor_; }

 private:
  std::string label_;
  core::KeyPair master_keys_;
  std::string master_id_;
  core::Digest group_id_;
  ledger::Ledger ledger_;
  monitor::BehaviorMonitor monitor_;
  std::map<std::string, DeviceRecord> devices_;
  std::map<std::string, std::vector<Bytes>> inboxes_;
  std::set<std::uint64_t> used_nonces_;
  std::uint64_t next_seq_id_ = 0;
  std::size_t delivered_ = 0;
  std::size_t rejected_ = 0;
  std::size_t unmonitored_ = 0;
};

}  // namespace iotchain::zone
