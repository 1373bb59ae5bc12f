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

// Deterministic discrete-event executor for one sender/receiver pair.
//
// A run alternates a scheduling decision (a Step) with its application to the
// Configuration. A step is one communication operation plus the local state
// change it triggers:
//
//   Begin       application calls Send(m) on an Idle sender
//   SenderSend  sender puts its current packet on the data channel
//   SenderPoll  sender takes one packet (or null) from the ack channel
//   Receive     receiver takes a data packet, reacts, and sends the ack
//   Lose        adversary removes a packet from either channel
//   Drain       an Idle sender with nothing left to send discards an ack
//
// The same `apply_step` is used by every scheduler and by the exhaustive
// explorer, so the two can never disagree on transitions.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sdlink/channel.hpp"
#include "sdlink/machine.hpp"

namespace sdlink {

/// Where the sender is inside one iteration of its sending loop.
enum class SenderCursor : std::uint8_t { AtSend, AtPoll };

template <Machine P>
struct BasicConfiguration {
  ProtocolParams params{1};
  typename P::Sender sender{};
  SenderCursor cursor = SenderCursor::AtSend;
  typename P::Receiver receiver{};
  Channel<DataPacket> chan_data{1};
  Channel<AckPacket> chan_ack{1};

  friend bool operator==(const BasicConfiguration&,
                         const BasicConfiguration&) = default;
};

using Configuration = BasicConfiguration<Sdl>;
using AbpConfiguration = BasicConfiguration<Abp>;

template <Machine P>
BasicConfiguration<P> clean_configuration(ProtocolParams params) {
  BasicConfiguration<P> cfg;
  cfg.params = params;
  cfg.chan_data = Channel<DataPacket>(params.capacity());
  cfg.chan_ack = Channel<AckPacket>(params.capacity());
  return cfg;
}

template <Machine P>
bool is_valid(const BasicConfiguration<P>& cfg) {
  const int c = cfg.params.capacity();
  if (cfg.chan_data.capacity() != c || cfg.chan_ack.capacity() != c) {
    return false;
  }
  if (cfg.chan_data.size() > static_cast<std::size_t>(c) ||
      cfg.chan_ack.size() > static_cast<std::size_t>(c)) {
    return false;
  }
  if (P::idle(cfg.sender) && cfg.cursor != SenderCursor::AtSend) return false;
  return P::valid(cfg.sender, cfg.params) && P::valid(cfg.receiver, cfg.params);
}

struct Step {
  enum class Kind : std::uint8_t {
    Begin,
    SenderSend,
    SenderPoll,
    Receive,
    Lose,
    Drain,
  };

  Kind kind = Kind::Begin;
  /// Which channel a Lose applies to.
  WireKind dir = WireKind::Data;
  /// Delivery/loss choice for SenderPoll, Receive, Lose and Drain.
  std::optional<ChannelChoice> take;
  /// Overflow choice for the send in SenderSend and the ack send in Receive.
  std::optional<ChannelChoice> evict;

  static Step begin() { return {Kind::Begin, WireKind::Data, {}, {}}; }
  static Step sender_send(std::optional<ChannelChoice> evict = {}) {
    return {Kind::SenderSend, WireKind::Data, {}, evict};
  }
  static Step sender_poll(ChannelChoice take) {
    return {Kind::SenderPoll, WireKind::Ack, take, {}};
  }
  static Step receive(std::size_t index,
                      std::optional<ChannelChoice> evict = {}) {
    return {Kind::Receive, WireKind::Data, ChannelChoice::deliver(index),
            evict};
  }
  static Step lose(WireKind dir, std::size_t index) {
    return {Kind::Lose, dir, ChannelChoice::lose(index), {}};
  }
  static Step drain(std::size_t index) {
    return {Kind::Drain, WireKind::Ack, ChannelChoice::deliver(index), {}};
  }

  friend bool operator==(const Step&, const Step&) = default;
};

std::string_view to_string(Step::Kind kind);

struct Event {
  enum class Kind : std::uint8_t {
    AppSend,
    PacketSent,
    PacketDelivered,
    PacketLost,
    PacketEvicted,
    NullPoll,
    MsgDelivered,
    SynchroDropped,
    AckDelivered,
    QueueReset,
  };

  std::uint64_t step = 0;
  Kind kind = Kind::AppSend;
  std::optional<WireKind> dir;
  std::optional<Payload> payload;
  std::optional<AltBit> ab;
  /// Harness identifier of an application send; never on the wire.
  std::optional<std::int64_t> seq;
  std::optional<std::string> token;

  friend bool operator==(const Event&, const Event&) = default;
};

std::string_view to_string(Event::Kind kind);
std::optional<Event::Kind> parse_event_kind(std::string_view name);

/// Application-side bookkeeping that is not part of the protocol state.
struct AppCursor {
  std::span<const std::string> messages;
  std::size_t next = 0;
  /// Sequence number of the Send in progress. Absent when the sender was
  /// found mid-Send in the initial configuration.
  std::optional<std::int64_t> in_flight_seq;
};

namespace detail {

template <class Packet>
Event packet_event(Event::Kind kind, const Packet& p) {
  Event e;
  e.kind = kind;
  e.dir = WireKindOf<Packet>::value;
  e.payload = p.payload;
  e.ab = p.ab;
  return e;
}

}  // namespace detail

/// Applies one step. `sink(Event&&)` receives every resulting event in order
/// (step indices are assigned by the sink). Throws ContractViolation if the
/// step is not enabled in `cfg`.
template <Machine P, class Sink>
void apply_step(BasicConfiguration<P>& cfg, const Step& step, AppCursor& app,
                Sink&& sink) {
  using K = Step::Kind;
  switch (step.kind) {
    case K::Begin: {
      if (!P::idle(cfg.sender) || app.next >= app.messages.size()) {
        throw ContractViolation("Begin: sender busy or nothing to send");
      }
      const auto seq = static_cast<std::int64_t>(app.next);
      const std::string& token = app.messages[app.next++];
      cfg.sender = P::begin_send(std::move(cfg.sender), Payload::app(token));
      cfg.cursor = SenderCursor::AtSend;
      app.in_flight_seq = seq;
      Event e;
      e.kind = Event::Kind::AppSend;
      e.seq = seq;
      e.token = token;
      sink(std::move(e));
      return;
    }
    case K::SenderSend: {
      if (P::idle(cfg.sender) || cfg.cursor != SenderCursor::AtSend) {
        throw ContractViolation("SenderSend: sender not at its send");
      }
      DataPacket pkt = P::emit(cfg.sender);
      sink(detail::packet_event(Event::Kind::PacketSent, pkt));
      auto sent = chan_send(std::move(cfg.chan_data), std::move(pkt),
                            step.evict);
      cfg.chan_data = std::move(sent.channel);
      if (sent.lost) {
        sink(detail::packet_event(Event::Kind::PacketEvicted, *sent.lost));
      }
      cfg.cursor = SenderCursor::AtPoll;
      return;
    }
    case K::SenderPoll: {
      if (P::idle(cfg.sender) || cfg.cursor != SenderCursor::AtPoll ||
          !step.take) {
        throw ContractViolation("SenderPoll: sender not at its poll");
      }
      auto taken = chan_take(std::move(cfg.chan_ack), *step.take);
      cfg.chan_ack = std::move(taken.channel);
      if (taken.packet) {
        sink(detail::packet_event(Event::Kind::PacketDelivered,
                                  *taken.packet));
      } else {
        Event e;
        e.kind = Event::Kind::NullPoll;
        e.dir = WireKind::Ack;
        sink(std::move(e));
      }
      auto [sender, ack_event] =
          P::poll(std::move(cfg.sender), cfg.params, taken.packet);
      cfg.sender = std::move(sender);
      cfg.cursor = SenderCursor::AtSend;
      if (ack_event) {
        Event e;
        e.kind = Event::Kind::AckDelivered;
        e.seq = app.in_flight_seq;
        e.token = ack_event->token();
        app.in_flight_seq.reset();
        sink(std::move(e));
      }
      return;
    }
    case K::Receive: {
      if (!step.take ||
          step.take->kind != ChannelChoice::Kind::DeliverIndex) {
        throw ContractViolation("Receive: needs a packet index");
      }
      auto taken = chan_take(std::move(cfg.chan_data), *step.take);
      cfg.chan_data = std::move(taken.channel);
      const DataPacket& pkt = *taken.packet;
      sink(detail::packet_event(Event::Kind::PacketDelivered, pkt));
      auto [receiver, action, ack, reset] =
          P::on_packet(std::move(cfg.receiver), cfg.params, pkt);
      cfg.receiver = std::move(receiver);
      if (action.kind == ReceiverAction::Kind::Delivered) {
        Event e;
        e.kind = Event::Kind::MsgDelivered;
        e.token = action.delivered->token();
        sink(std::move(e));
      } else if (action.kind == ReceiverAction::Kind::DroppedSynchro) {
        Event e;
        e.kind = Event::Kind::SynchroDropped;
        sink(std::move(e));
      }
      if (reset) {
        Event e;
        e.kind = Event::Kind::QueueReset;
        sink(std::move(e));
      }
      sink(detail::packet_event(Event::Kind::PacketSent, ack));
      auto sent = chan_send(std::move(cfg.chan_ack), std::move(ack),
                            step.evict);
      cfg.chan_ack = std::move(sent.channel);
      if (sent.lost) {
        sink(detail::packet_event(Event::Kind::PacketEvicted, *sent.lost));
      }
      return;
    }
    case K::Lose: {
      const std::size_t held = step.dir == WireKind::Data
                                   ? cfg.chan_data.size()
                                   : cfg.chan_ack.size();
      if (!step.take || step.take->index >= held) {
        throw ContractViolation("Lose: index out of range");
      }
      if (step.dir == WireKind::Data) {
        auto pkt = cfg.chan_data.at(step.take->index);
        cfg.chan_data = chan_lose(std::move(cfg.chan_data), *step.take);
        sink(detail::packet_event(Event::Kind::PacketLost, pkt));
      } else {
        auto pkt = cfg.chan_ack.at(step.take->index);
        cfg.chan_ack = chan_lose(std::move(cfg.chan_ack), *step.take);
        sink(detail::packet_event(Event::Kind::PacketLost, pkt));
      }
      return;
    }
    case K::Drain: {
      if (!P::idle(cfg.sender) || app.next < app.messages.size() ||
          !step.take ||
          step.take->kind != ChannelChoice::Kind::DeliverIndex) {
        throw ContractViolation("Drain: sender still has work");
      }
      auto taken = chan_take(std::move(cfg.chan_ack), *step.take);
      cfg.chan_ack = std::move(taken.channel);
      sink(detail::packet_event(Event::Kind::PacketDelivered, *taken.packet));
      return;
    }
  }
}

/// All requested sends acknowledged, sender idle, both channels empty.
template <Machine P>
bool is_quiescent(const BasicConfiguration<P>& cfg, const AppCursor& app) {
  return P::idle(cfg.sender) && app.next >= app.messages.size() &&
         cfg.chan_data.empty() && cfg.chan_ack.empty();
}

/// Every enabled step, with choices over distinct packets only (identical
/// packets are interchangeable). Null receives are omitted since they change
/// nothing.
template <Machine P>
std::vector<Step> enabled_steps(const BasicConfiguration<P>& cfg,
                                const AppCursor& app);

/// The deterministic round-trip schedule: send, receive that packet, poll its
/// ack. From a clean configuration nothing is ever lost.
template <Machine P>
std::optional<Step> lockstep_step(const BasicConfiguration<P>& cfg,
                                  const AppCursor& app);

struct RandomFair {
  std::uint64_t seed = 0;
  double p_deliver = 0.6;
  double p_lose = 0.1;
  /// Resends tolerated before the scheduler forces a delivery. 0 picks the
  /// default of 4c+4.
  int patience = 0;

  friend bool operator==(const RandomFair&, const RandomFair&) = default;
};

struct LockStep {
  friend bool operator==(const LockStep&, const LockStep&) = default;
};

struct Scripted {
  std::vector<Step> steps;
  /// Continue with the lock-step schedule once the script is exhausted;
  /// otherwise the run stops there.
  bool then_lockstep = true;

  friend bool operator==(const Scripted&, const Scripted&) = default;
};

using SchedulerPolicy = std::variant<RandomFair, LockStep, Scripted>;

/// Throws std::invalid_argument on out-of-range RandomFair parameters.
void validate(const SchedulerPolicy& policy);

inline int default_patience(const ProtocolParams& params) {
  return 4 * params.capacity() + 4;
}

template <Machine P>
struct BasicTrace {
  BasicConfiguration<P> config_init;
  SchedulerPolicy policy;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> app_messages;
  std::vector<Event> events;
  bool quiescent = false;
  /// Scheduling decisions taken, including null receives.
  std::uint64_t steps_taken = 0;
  /// Not serialized; lets tests compare against a replay of `events`.
  BasicConfiguration<P> config_final;
};

using Trace = BasicTrace<Sdl>;
using AbpTrace = BasicTrace<Abp>;

/// Executes until quiescence or `max_steps` scheduling decisions. Throws
/// std::invalid_argument if app tokens repeat or max_steps == 0.
template <Machine P>
BasicTrace<P> run(const BasicConfiguration<P>& init,
                  const SchedulerPolicy& policy,
                  std::span<const std::string> app_messages,
                  std::uint64_t max_steps);

/// Seeded arbitrary starting point: corrupted sender phase/bit/ack count and
/// pending payload, arbitrary receiver bit and queue, 0..c ghosts per channel
/// drawn from `alphabet` plus the synchronization marker.
template <Machine P>
BasicConfiguration<P> arbitrary_configuration(
    std::uint64_t seed, ProtocolParams params,
    std::span<const std::string> alphabet);

/// Rebuilds the final configuration by re-running every logged event through
/// the transition functions. Throws ContractViolation if the log is
/// inconsistent with what the machines would have produced.
template <Machine P>
BasicConfiguration<P> replay_events(const BasicTrace<P>& trace);

enum class ScenarioId : std::uint8_t {
  GhostTight,
  DupTight,
  ReorderTight,
  AbpFail,
};

std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);

template <Machine P>
struct ScenarioSetup {
  BasicConfiguration<P> config;
  SchedulerPolicy policy;
  std::vector<std::string> app_messages;
};

/// Fixed configuration, script and messages for each tightness construction.
template <Machine P>
ScenarioSetup<P> scenario(ScenarioId id);

/// Step budget large enough for any scenario to quiesce.
std::uint64_t scenario_max_steps(ScenarioId id);

}  // namespace sdlink
