#include "iotchain/zone/zone.hpp"

#include "iotchain/core/errors.hpp"
#include "iotchain/monitor/snapshot.hpp"

namespace iotchain::zone {

Bytes Ticket::signing_bytes() const {
  core::Writer out;
  out.digest(group_id).str(follower_id).fixed(follower_pubkey.view()).u64(issued_at);
  return out.take();
}

void Ticket::encode_to(core::Writer& out) const {
  out.fixed(signing_bytes()).fixed(master_signature.view());
}

Bytes Ticket::encode() const {
  core::Writer out;
  encode_to(out);
  return out.take();
}

Ticket Ticket::decode(core::Reader& in) {
  Ticket t;
  t.group_id = in.digest();
  t.follower_id = in.str();
  t.follower_pubkey = core::PublicKey::from_bytes(in.fixed(core::PublicKey::kSize));
  t.issued_at = in.u64();
  t.master_signature = core::Signature::from_bytes(in.fixed(core::Signature::kSize));
  return t;
}

bool verify_ticket(const Ticket& ticket, const core::PublicKey& master_key) {
  return core::verify(master_key, ticket.signing_bytes(), ticket.master_signature);
}

Bytes AssociationRequest::signing_bytes() const {
  core::Writer out;
  ticket.encode_to(out);
  out.u64(nonce);
  return out.take();
}

Bytes AssociationRequest::encode() const {
  core::Writer out;
  out.fixed(signing_bytes()).fixed(follower_signature.view());
  return out.take();
}

AssociationRequest AssociationRequest::decode(ByteView data) {
  core::Reader in(data);
  AssociationRequest r;
  r.ticket = Ticket::decode(in);
  r.nonce = in.u64();
  r.follower_signature = core::Signature::from_bytes(in.fixed(core::Signature::kSize));
  in.expect_done();
  return r;
}

AssociationRequest make_association_request(const Ticket& ticket, std::uint64_t nonce,
                                            const core::SecretKey& follower_key) {
  AssociationRequest r{ticket, nonce, {}};
  r.follower_signature = core::sign(follower_key, r.signing_bytes());
  return r;
}

Message make_message(std::string from, std::string to, Bytes payload, std::uint64_t seq_id, std::uint64_t timestamp,
                     const core::SecretKey& sender_key) {
  const auto tx = ledger::make_transaction(seq_id, from, core::hash(payload), timestamp, sender_key);
  return Message{std::move(from), std::move(to), std::move(payload), seq_id, timestamp, tx.signature};
}

const char* to_string(AssociationStatus status) noexcept {
  switch (status) {
    case AssociationStatus::accepted: return "accepted";
    case AssociationStatus::integrity: return "rejected(integrity)";
    case AssociationStatus::ticket: return "rejected(ticket)";
    case AssociationStatus::replay: return "rejected(replay)";
    case AssociationStatus::foreign_ticket: return "rejected(foreign-ticket)";
  }
  return "unknown";
}

const char* to_string(RouteStatus status) noexcept {
  switch (status) {
    case RouteStatus::delivered: return "delivered";
    case RouteStatus::unknown_device: return "rejected(unknown-device)";
    case RouteStatus::invalid_signature: return "rejected(invalid-signature)";
    case RouteStatus::replay: return "rejected(replay)";
  }
  return "unknown";
}

Zone::Zone(std::string label, core::KeyPair master_keys, std::string master_id, ZoneConfig config)
    : label_(std::move(label)),
      master_keys_(std::move(master_keys)),
      master_id_(std::move(master_id)),
      group_id_(derive_group_id(master_keys_.public_key, label_)),
      ledger_(config.blocksize),
      monitor_(config.trust) {
  devices_[master_id_] = DeviceRecord{master_id_, master_keys_.public_key, true};
}

core::Digest Zone::derive_group_id(const core::PublicKey& master_key, std::string_view label) {
  core::Writer out;
  out.fixed(master_key.view()).fixed(as_bytes(label));
  return core::hash(out.data());
}

Ticket Zone::issue_ticket(const std::string& follower_id, const core::PublicKey& follower_key, std::uint64_t tick) {
  if (follower_id.empty()) throw Error(Errc::invalid_argument, "follower id must not be empty");
  if (devices_.contains(follower_id)) {
    throw Error(Errc::already_registered, "device '" + follower_id + "' is already registered in zone " + label_);
  }
  Ticket t{group_id_, follower_id, follower_key, tick, {}};
  t.master_signature = core::sign(master_keys_.secret_key, t.signing_bytes());
  devices_[follower_id] = DeviceRecord{follower_id, follower_key, false};
  return t;
}

AssociationResult Zone::associate(const AssociationRequest& request, std::uint64_t tick) {
  const auto& ticket = request.ticket;
  if (!core::verify(ticket.follower_pubkey, request.signing_bytes(), request.follower_signature)) {
    return {AssociationStatus::integrity, 0};
  }
  if (ticket.group_id != group_id_) return {AssociationStatus::foreign_ticket, 0};
  const auto it = devices_.find(ticket.follower_id);
  if (!verify_ticket(ticket, master_keys_.public_key) || it == devices_.end() ||
      it->second.public_key != ticket.follower_pubkey || ticket.follower_id == master_id_) {
    return {AssociationStatus::ticket, 0};
  }
  if (used_nonces_.contains(request.nonce)) return {AssociationStatus::replay, 0};

  const auto seq = reserve_seq_id();
  const auto tx = ledger::make_transaction(seq, master_id_, core::hash(request.encode()), tick, master_keys_.secret_key);
  if (!ledger_.submit(tx, master_keys_.public_key).accepted()) {
    throw Error(Errc::invalid_argument, "ledger refused the master's association transaction");
  }
  used_nonces_.insert(request.nonce);
  it->second.active = true;
  return {AssociationStatus::accepted, seq};
}

RouteResult Zone::route_message(const Message& message) {
  RouteResult result;
  const auto sender = devices_.find(message.from);
  if (sender == devices_.end() || !sender->second.active || !is_active(message.to)) {
    ++rejected_;
    result.status = RouteStatus::unknown_device;
    return result;
  }

  ledger::Transaction tx;
  tx.seq_id = message.seq_id;
  tx.device_id = message.from;
  tx.payload_hash = core::hash(message.payload);
  tx.timestamp = message.timestamp;
  tx.signature = message.signature;
  const auto submitted = ledger_.submit(tx, sender->second.public_key);
  if (!submitted.accepted()) {
    ++rejected_;
    result.status = submitted.status == ledger::SubmitStatus::replay ? RouteStatus::replay
                                                                     : RouteStatus::invalid_signature;
    return result;
  }

  inboxes_[message.to].push_back(message.payload);
  ++delivered_;

  std::optional<monitor::Snapshot> snapshot;
  try {
    snapshot = monitor::Snapshot::decode(message.payload);
  } catch (const Error&) {
  }
  if (!snapshot || snapshot->device_id != message.from) {
    ++unmonitored_;
    return result;
  }
  snapshot->seq_id = message.seq_id;
  try {
    if (monitor_.trained()) {
      result.event = monitor_.ingest(std::move(*snapshot));
    } else {
      monitor_.store().record(std::move(*snapshot));
    }
  } catch (const Error& e) {
    if (e.code() != Errc::invalid_feature) throw;
    ++unmonitored_;
  }
  return result;
}

bool Zone::is_active(const std::string& device_id) const {
  const auto it = devices_.find(device_id);
  return it != devices_.end() && it->second.active;
}

const std::vector<Bytes>& Zone::inbox(const std::string& device_id) const {
  static const std::vector<Bytes> empty;
  const auto it = inboxes_.find(device_id);
  return it == inboxes_.end() ? empty : it->second;
}

ZoneStatus Zone::status() const {
  ZoneStatus s;
  s.label = label_;
  s.group_id = group_id_;
  s.trust = monitor_.trust_level();
  s.ledger_height = ledger_.height();
  for (const auto& [id, rec] : devices_) (rec.active ? s.active : s.pending) += 1;
  s.delivered = delivered_;
  s.rejected = rejected_;
  s.unmonitored = unmonitored_;
  s.sensor_hints = monitor_.anomaly_hints();
  return s;
}

}  // namespace iotchain::zone
