// Copyright 2026 The sdlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bounded, non-FIFO, lossy directed channel.
//
// Contents form a multiset kept in canonical (sorted) order so that an index
// names a packet deterministically. Every nondeterministic outcome (which
// packet is received, which one is lost on overflow, spontaneous losses,
// null receives) is an explicit ChannelChoice supplied by the caller.
// Byte-identical packets are interchangeable, so no insertion counter is
// needed to break ties.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdlink/types.hpp"

namespace sdlink {

struct ChannelChoice {
  enum class Kind : std::uint8_t {
    DeliverIndex,
    DeliverNull,
    EvictIndex,
    EvictIncoming,
    LoseIndex,
  };

  Kind kind = Kind::DeliverNull;
  std::size_t index = 0;

  static constexpr ChannelChoice deliver(std::size_t k) {
    return {Kind::DeliverIndex, k};
  }
  static constexpr ChannelChoice deliver_null() {
    return {Kind::DeliverNull, 0};
  }
  static constexpr ChannelChoice evict(std::size_t k) {
    return {Kind::EvictIndex, k};
  }
  static constexpr ChannelChoice evict_incoming() {
    return {Kind::EvictIncoming, 0};
  }
  static constexpr ChannelChoice lose(std::size_t k) {
    return {Kind::LoseIndex, k};
  }

  friend constexpr bool operator==(const ChannelChoice&,
                                   const ChannelChoice&) = default;
};

template <class Packet>
class Channel {
 public:
  static constexpr WireKind kWire = WireKindOf<Packet>::value;

  explicit Channel(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("channel capacity < 1");
  }

  int capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return contents_.size(); }
  bool empty() const noexcept { return contents_.empty(); }
  bool full() const noexcept {
    return std::cmp_greater_equal(contents_.size(), capacity_);
  }
  std::span<const Packet> contents() const noexcept { return contents_; }
  const Packet& at(std::size_t k) const { return contents_.at(k); }

  /// Index of some packet equal to `p`, if present.
  std::optional<std::size_t> find(const Packet& p) const {
    auto it = std::lower_bound(contents_.begin(), contents_.end(), p);
    if (it == contents_.end() || !(*it == p)) return std::nullopt;
    return static_cast<std::size_t>(it - contents_.begin());
  }

  friend bool operator==(const Channel&, const Channel&) = default;

  // Raw mutators; the chan_* functions below carry the contract checks.
  void insert(Packet p) {
    contents_.insert(std::upper_bound(contents_.begin(), contents_.end(), p),
                     std::move(p));
  }
  Packet remove_at(std::size_t k) {
    Packet p = std::move(contents_.at(k));
    contents_.erase(contents_.begin() + static_cast<std::ptrdiff_t>(k));
    return p;
  }

 private:
  int capacity_;
  std::vector<Packet> contents_;
};

/// Outcome of a send; `lost` names the packet dropped by an overflow.
template <class Packet>
struct ChannelSendResult {
  Channel<Packet> channel;
  std::optional<Packet> lost;
};

/// Adds `pkt`. When the channel is full the choice must say which packet of
/// the union is lost (a resident by index, or the incoming packet); when it
/// is not full no choice may be given.
template <class Packet>
ChannelSendResult<Packet> chan_send(Channel<Packet> ch, Packet pkt,
                                    std::optional<ChannelChoice> choice) {
  if (!ch.full()) {
    if (choice) throw ContractViolation("chan_send: choice given, not full");
    ch.insert(std::move(pkt));
    return {std::move(ch), std::nullopt};
  }
  if (!choice) throw ContractViolation("chan_send: full channel needs choice");
  if (choice->kind == ChannelChoice::Kind::EvictIncoming) {
    return {std::move(ch), std::move(pkt)};
  }
  if (choice->kind != ChannelChoice::Kind::EvictIndex ||
      choice->index >= ch.size()) {
    throw ContractViolation("chan_send: invalid eviction choice");
  }
  Packet victim = ch.remove_at(choice->index);
  ch.insert(std::move(pkt));
  return {std::move(ch), std::move(victim)};
}

template <class Packet>
struct ChannelTakeResult {
  Channel<Packet> channel;
  std::optional<Packet> packet;
};

/// Receive: DeliverIndex removes and returns that packet, DeliverNull returns
/// nothing even if the channel holds packets.
template <class Packet>
ChannelTakeResult<Packet> chan_take(Channel<Packet> ch, ChannelChoice choice) {
  if (choice.kind == ChannelChoice::Kind::DeliverNull) {
    return {std::move(ch), std::nullopt};
  }
  if (choice.kind != ChannelChoice::Kind::DeliverIndex ||
      choice.index >= ch.size()) {
    throw ContractViolation("chan_take: invalid delivery choice");
  }
  Packet p = ch.remove_at(choice.index);
  return {std::move(ch), std::move(p)};
}

template <class Packet>
Channel<Packet> chan_lose(Channel<Packet> ch, ChannelChoice choice) {
  if (choice.kind != ChannelChoice::Kind::LoseIndex ||
      choice.index >= ch.size()) {
    throw ContractViolation("chan_lose: invalid loss choice");
  }
  ch.remove_at(choice.index);
  return ch;
}

/// A channel that starts out holding never-sent packets.
template <class Packet>
Channel<Packet> init_with_ghosts(int capacity, std::span<const Packet> ghosts) {
  Channel<Packet> ch(capacity);
  if (std::cmp_greater(ghosts.size(), capacity)) {
    throw std::invalid_argument("init_with_ghosts: more ghosts than capacity");
  }
  for (const auto& g : ghosts) ch.insert(g);
  return ch;
}

}  // namespace sdlink
