#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iotchain/core/hash.hpp"
#include "iotchain/core/serialize.hpp"
#include "iotchain/core/signature.hpp"

namespace iotchain::ledger {

/// One ledger record. Only the payload hash goes on-chain; the payload itself
/// lives with whoever produced it (the behavior monitor store for snapshots).
struct Transaction {
  std::uint64_t seq_id = 0;
  std::string device_id;
  core::Digest payload_hash;
  std::uint64_t timestamp = 0;
  core::Signature signature;

  /// The bytes the originating device signs: (seq_id, device_id, payload_hash, timestamp).
  Bytes signing_bytes() const;
  /// signing_bytes() followed by the raw 64-byte signature.
  Bytes encode() const;
  void encode_to(core::Writer& out) const;
  static Transaction decode(core::Reader& in);

  core::Digest digest() const { return core::hash(encode()); }

  bool operator==(const Transaction&) const = default;
};

Transaction make_transaction(std::uint64_t seq_id, std::string device_id, const core::Digest& payload_hash,
                             std::uint64_t timestamp, const core::SecretKey& signer);

struct BlockHeader {
  core::Digest prev_hash;
  core::Digest tx_root;
  std::uint64_t timestamp = 0;
  std::uint64_t height = 0;

  Bytes encode() const;
  core::Digest digest() const { return core::hash(encode()); }

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  /// Stored copy of header.digest(); lets a reader check the newest block
  /// without a successor pointing at it.
  core::Digest header_hash;
  std::vector<Transaction> transactions;

  Bytes encode() const;
  /// Throws Error(Errc::decode) on malformed or trailing bytes.
  static Block decode(ByteView data);

  bool operator==(const Block&) const = default;
};

/// Hash of the in-order concatenation of transaction digests.
core::Digest compute_tx_root(std::span<const Transaction> transactions);

}  // namespace iotchain::ledger
