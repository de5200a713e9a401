#include "iotchain/ledger/ledger.hpp"

#include <algorithm>

#include "iotchain/core/errors.hpp"

namespace iotchain::ledger {

const char* to_string(SubmitStatus status) noexcept {
  switch (status) {
    case SubmitStatus::accepted: return "accepted";
    case SubmitStatus::invalid_signature: return "invalid-signature";
    case SubmitStatus::replay: return "replay";
  }
  return "unknown";
}

Ledger::Ledger(std::size_t blocksize) : blocksize_(blocksize) {
  if (blocksize == 0) throw Error(Errc::invalid_argument, "blocksize must be positive");
}

Ledger Ledger::from_parts(std::size_t blocksize, std::map<std::string, core::PublicKey> keys,
                          std::vector<Block> blocks) {
  Ledger ledger(blocksize);
  ledger.keys_ = std::move(keys);
  ledger.chain_ = std::move(blocks);
  for (const auto& block : ledger.chain_) {
    ledger.index_block(block);
    for (const auto& tx : block.transactions) {
      ledger.last_seq_id_ = std::max(ledger.last_seq_id_.value_or(0), tx.seq_id);
    }
  }
  return ledger;
}

SubmitResult Ledger::submit(const Transaction& tx, const core::PublicKey& device_key) {
  if (auto known = keys_.find(tx.device_id); known != keys_.end() && known->second != device_key) {
    return {SubmitStatus::invalid_signature, std::nullopt};
  }
  if (!core::verify(device_key, tx.signing_bytes(), tx.signature)) {
    return {SubmitStatus::invalid_signature, std::nullopt};
  }
  if (last_seq_id_ && tx.seq_id <= *last_seq_id_) {
    return {SubmitStatus::replay, std::nullopt};
  }
  keys_.emplace(tx.device_id, device_key);
  last_seq_id_ = tx.seq_id;
  pool_.push_back(tx);

  SubmitResult result;
  if (pool_.size() >= blocksize_) result.sealed_height = seal_block().header.height;
  return result;
}

const Block& Ledger::seal_block() {
  if (pool_.empty()) throw Error(Errc::empty_pool, "cannot seal a block from an empty pool");

  Block block;
  block.header.height = chain_.size();
  block.header.prev_hash = chain_.empty() ? core::Digest::zero() : chain_.back().header.digest();
  block.header.tx_root = compute_tx_root(pool_);
  block.header.timestamp = 0;
  for (const auto& tx : pool_) block.header.timestamp = std::max(block.header.timestamp, tx.timestamp);
  block.header_hash = block.header.digest();
  block.transactions = std::move(pool_);
  pool_.clear();

  chain_.push_back(std::move(block));
  index_block(chain_.back());
  return chain_.back();
}

std::optional<std::uint64_t> Ledger::flush() {
  if (pool_.empty()) return std::nullopt;
  return seal_block().header.height;
}

void Ledger::index_block(const Block& block) {
  for (std::size_t i = 0; i < block.transactions.size(); ++i) {
    index_[block.transactions[i].payload_hash].push_back({block.header.height, i});
  }
}

ChainCheck Ledger::verify_chain() const {
  std::optional<std::uint64_t> prev_seq;
  for (std::size_t h = 0; h < chain_.size(); ++h) {
    const Block& block = chain_[h];
    auto bad = [h](std::string reason) { return ChainCheck{h, std::move(reason)}; };

    if (block.header.height != h) return bad("height field does not match position");
    const auto expected_prev = h == 0 ? core::Digest::zero() : chain_[h - 1].header.digest();
    if (block.header.prev_hash != expected_prev) return bad("previous-hash link broken");
    if (block.header_hash != block.header.digest()) return bad("stored header hash mismatch");
    if (block.transactions.empty() || block.transactions.size() > blocksize_) {
      return bad("transaction count outside [1, blocksize]");
    }
    if (compute_tx_root(block.transactions) != block.header.tx_root) return bad("tx_root mismatch");

    for (const auto& tx : block.transactions) {
      auto key = keys_.find(tx.device_id);
      if (key == keys_.end()) return bad("unknown device " + tx.device_id);
      if (!core::verify(key->second, tx.signing_bytes(), tx.signature)) {
        return bad("signature check failed for seq_id " + std::to_string(tx.seq_id));
      }
      if (prev_seq && tx.seq_id <= *prev_seq) return bad("seq_id not strictly increasing");
      prev_seq = tx.seq_id;
    }
  }
  return {};
}

std::vector<TxLocation> Ledger::locations(const core::Digest& hash_id) const {
  auto it = index_.find(hash_id);
  if (it == index_.end()) return {};
  return it->second;
}

std::optional<LookupResult> Ledger::find(const core::Digest& hash_id) const {
  auto it = index_.find(hash_id);
  if (it == index_.end() || it->second.empty()) return std::nullopt;
  const auto loc = it->second.front();
  return LookupResult{chain_[loc.height].transactions[loc.position], loc};
}

LookupResult Ledger::lookup(const core::Digest& hash_id) const {
  if (auto found = find(hash_id)) return *found;
  throw Error(Errc::not_found, "no sealed transaction with hash-id " + hash_id.hex());
}

}  // namespace iotchain::ledger
