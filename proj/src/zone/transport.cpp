#include "iotchain/zone/transport.hpp"

#include <algorithm>

#include "iotchain/core/errors.hpp"

namespace iotchain::zone {

void FaultModel::validate() const {
  if (!(drop_p >= 0.0 && drop_p <= 1.0)) throw Error(Errc::invalid_argument, "drop probability must lie in [0, 1]");
  if (!(corrupt_p >= 0.0 && corrupt_p <= 1.0)) {
    throw Error(Errc::invalid_argument, "corruption probability must lie in [0, 1]");
  }
}

Transport::Transport(FaultModel faults, core::Rng rng) : faults_(faults), rng_(rng) { faults_.validate(); }

void Transport::send(std::string zone, Message message, std::uint64_t now) {
  // Always draw the same number of values so fault settings do not shift later streams.
  const double drop_draw = rng_.uniform();
  const double corrupt_draw = rng_.uniform();
  const std::uint64_t bit_draw = rng_.next_u64();
  const std::uint64_t delay = faults_.max_delay == 0 ? 0 : rng_.below(faults_.max_delay + 1);

  if (drop_draw < faults_.drop_p) {
    ++dropped_;
    return;
  }
  if (corrupt_draw < faults_.corrupt_p && !message.payload.empty()) {
    const auto bit = bit_draw % (message.payload.size() * 8);
    message.payload[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ++corrupted_;
  }
  queue_.push_back(Envelope{std::move(zone), std::move(message), now + delay});
}

std::vector<Envelope> Transport::deliver(std::uint64_t now) {
  std::vector<Envelope> due;
  std::vector<Envelope> later;
  for (auto& e : queue_) (e.deliver_at <= now ? due : later).push_back(std::move(e));
  queue_ = std::move(later);
  std::stable_sort(due.begin(), due.end(),
                   [](const Envelope& a, const Envelope& b) { return a.deliver_at < b.deliver_at; });
  return due;
}

std::vector<Envelope> Transport::drain() {
  std::vector<Envelope> all = std::move(queue_);
  queue_.clear();
  std::stable_sort(all.begin(), all.end(),
                   [](const Envelope& a, const Envelope& b) { return a.deliver_at < b.deliver_at; });
  return all;
}

}  // namespace iotchain::zone
