#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iotchain/core/rng.hpp"
#include "iotchain/zone/zone.hpp"

namespace iotchain::zone {

/// Independent per-message faults applied at send time.
struct FaultModel {
  double drop_p = 0.0;
  /// Probability of flipping one random payload bit.
  double corrupt_p = 0.0;
  /// Each message is held for a uniform number of ticks in [0, max_delay].
  std::uint64_t max_delay = 0;

  void validate() const;
};

struct Envelope {
  std::string zone;
  Message message;
  std::uint64_t deliver_at = 0;
};

/// In-memory message queue standing in for the network.
class Transport {
 public:
  Transport(FaultModel faults, core::Rng rng);

  void send(std::string zone, Message message, std::uint64_t now);
  /// Messages due at or before `now`, ordered by due tick then send order.
  std::vector<Envelope> deliver(std::uint64_t now);
  /// Everything still queued, regardless of due tick.
  std::vector<Envelope> drain();

  std::size_t in_flight() const { return queue_.size(); }
  std::size_t dropped() const { return dropped_; }
  std::size_t corrupted() const { return corrupted_; }

 private:
  FaultModel faults_;
  core::Rng rng_;
  std::vector<Envelope> queue_;
  std::size_t dropped_ = 0;
  std::size_t corrupted_ = 0;
};

}  // namespace iotchain::zone
