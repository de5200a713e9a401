#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotchain/ledger/transaction.hpp"

namespace iotchain::ledger {

enum class SubmitStatus { accepted, invalid_signature, replay };

const char* to_string(SubmitStatus status) noexcept;

struct SubmitResult {
  SubmitStatus status = SubmitStatus::accepted;
  /// Height of the block sealed by this submission, if the pool filled up.
  std::optional<std::uint64_t> sealed_height;

  bool accepted() const { return status == SubmitStatus::accepted; }
};

struct TxLocation {
  std::uint64_t height = 0;
  std::size_t position = 0;

  bool operator==(const TxLocation&) const = default;
};

struct LookupResult {
  Transaction transaction;
  TxLocation location;
};

struct ChainCheck {
  std::optional<std::uint64_t> first_bad_height;
  std::string reason;

  bool ok() const { return !first_bad_height.has_value(); }
};

/// Append-only hash-chained ledger for one zone. Single writer: the zone master.
class Ledger {
 public:
  static constexpr std::size_t kDefaultBlocksize = 10;

  explicit Ledger(std::size_t blocksize = kDefaultBlocksize);

  /// Rebuilds a ledger from exported parts without validating them; call
  /// verify_chain() afterwards.
  static Ledger from_parts(std::size_t blocksize, std::map<std::string, core::PublicKey> keys,
                           std::vector<Block> blocks);

  /// Validates the signature under `device_key` and the seq_id ordering, pools
  /// the transaction, and seals a block once the pool reaches the blocksize.
  /// The first key seen for a device is pinned; a later, different key is
  /// treated as a signature failure.
  SubmitResult submit(const Transaction& tx, const core::PublicKey& device_key);

  /// Throws Error(Errc::empty_pool) when nothing is pending.
  const Block& seal_block();

  /// Seals a short final block if anything is pending.
  std::optional<std::uint64_t> flush();

  ChainCheck verify_chain() const;

  /// Sealed transactions only. Throws Error(Errc::not_found).
  LookupResult lookup(const core::Digest& hash_id) const;
  std::optional<LookupResult> find(const core::Digest& hash_id) const;
  /// Every sealed location carrying this payload hash, in chain order.
  std::vector<TxLocation> locations(const core::Digest& hash_id) const;

  std::uint64_t height() const { return chain_.size(); }
  std::size_t blocksize() const { return blocksize_; }
  const std::vector<Block>& blocks() const { return chain_; }
  const std::vector<Transaction>& pool() const { return pool_; }
  const std::map<std::string, core::PublicKey>& keys() const { return keys_; }
  std::optional<std::uint64_t> last_seq_id() const { return last_seq_id_; }

 private:
  void index_block(const Block& block);

  std::size_t blocksize_;
  std::vector<Block> chain_;
  std::vector<Transaction> pool_;
  std::map<std::string, core::PublicKey> keys_;
  std::unordered_map<core::Digest, std::vector<TxLocation>, core::DigestHasher> index_;
  std::optional<std::uint64_t> last_seq_id_;
};

}  // namespace iotchain::ledger
