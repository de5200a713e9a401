#include "iotchain/ledger/transaction.hpp"

#include "iotchain/core/errors.hpp"

namespace iotchain::ledger {

using core::Reader;
using core::Writer;

Bytes Transaction::signing_bytes() const {
  Writer out;
  out.u64(seq_id).str(device_id).digest(payload_hash).u64(timestamp);
  return out.take();
}

void Transaction::encode_to(Writer& out) const {
  out.u64(seq_id).str(device_id).digest(payload_hash).u64(timestamp).fixed(signature.view());
}

Bytes Transaction::encode() const {
  Writer out;
  encode_to(out);
  return out.take();
}

Transaction Transaction::decode(Reader& in) {
  Transaction tx;
  tx.seq_id = in.u64();
  tx.device_id = in.str();
  tx.payload_hash = in.digest();
  tx.timestamp = in.u64();
  tx.signature = core::Signature::from_bytes(in.fixed(core::Signature::kSize));
  return tx;
}

Transaction make_transaction(std::uint64_t seq_id, std::string device_id, const core::Digest& payload_hash,
                             std::uint64_t timestamp, const core::SecretKey& signer) {
  Transaction tx;
  tx.seq_id = seq_id;
  tx.device_id = std::move(device_id);
  tx.payload_hash = payload_hash;
  tx.timestamp = timestamp;
  tx.signature = core::sign(signer, tx.signing_bytes());
  return tx;
}

Bytes BlockHeader::encode() const {
  Writer out;
  out.digest(prev_hash).digest(tx_root).u64(timestamp).u64(height);
  return out.take();
}

Bytes Block::encode() const {
  Writer out;
  out.fixed(header.encode()).digest(header_hash).u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) tx.encode_to(out);
  return out.take();
}

Block Block::decode(ByteView data) {
  Reader in(data);
  Block block;
  block.header.prev_hash = in.digest();
  block.header.tx_root = in.digest();
  block.header.timestamp = in.u64();
  block.header.height = in.u64();
  block.header_hash = in.digest();
  const auto count = in.u32();
  // Each transaction needs at least 116 bytes; reject absurd counts early.
  if (count > in.remaining() / 116) {
    throw Error(Errc::decode, "transaction count " + std::to_string(count) + " exceeds record size");
  }
  block.transactions.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) block.transactions.push_back(Transaction::decode(in));
  in.expect_done();
  return block;
}

core::Digest compute_tx_root(std::span<const Transaction> transactions) {
  Writer out;
  for (const auto& tx : transactions) out.digest(tx.digest());
  return core::hash(out.data());
}

}  // namespace iotchain::ledger
