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

// Sender and receiver machines of the stabilizing data-link protocol.
//
// The sender's blocking Send(m) is reified as three phases:
//
//   Idle --begin_send--> SynchroPhase --3c+2 acks--> PayloadPhase
//        --3c+2 acks--> Idle (DeliverAck)
//
// Each loop iteration of the sending loop emits one DataPacket and polls the
// ack channel once. `sender_tick` performs a whole iteration; the simulator
// uses the `sender_emit` / `sender_poll` halves so other processes may step
// between the send and the poll.
//
// The receiver counts copies of each (payload, ab) key in a most-recently
// touched queue of at most c+1 entries and acts once a key reaches c+1.

#pragma once

#include <optional>
#include <vector>

#include "sdlink/types.hpp"

namespace sdlink {

enum class SenderPhase : std::uint8_t { Idle, SynchroPhase, PayloadPhase };

std::string_view to_string(SenderPhase phase);

struct SenderState {
  AltBit ab;
  SenderPhase phase = SenderPhase::Idle;
  /// The application payload of the Send in progress. Absent when Idle.
  std::optional<Payload> current_payload;
  int ack_count = 0;

  friend bool operator==(const SenderState&, const SenderState&) = default;
};

struct QueueEntry {
  Payload payload;
  AltBit ab;
  int count = 0;

  friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

struct ReceiverState {
  AltBit last_delivered;
  /// Front is the most recently touched entry.
  std::vector<QueueEntry> queue;

  friend bool operator==(const ReceiverState&, const ReceiverState&) = default;
};

struct ReceiverAction {
  enum class Kind : std::uint8_t { NoAction, Delivered, DroppedSynchro };

  Kind kind = Kind::NoAction;
  /// Set iff kind == Delivered; always an App payload.
  std::optional<Payload> delivered;

  static ReceiverAction none() { return {}; }
  static ReceiverAction deliver(Payload p) {
    return {Kind::Delivered, std::move(p)};
  }
  static ReceiverAction drop_synchro() { return {Kind::DroppedSynchro, {}}; }

  friend bool operator==(const ReceiverAction&,
                         const ReceiverAction&) = default;
};

struct SenderTickResult {
  SenderState state;
  std::optional<DataPacket> emit;
  /// The payload handed back to the application (DeliverAck), if the payload
  /// phase completed during this tick.
  std::optional<Payload> ack_event;
};

struct SenderPollResult {
  SenderState state;
  std::optional<Payload> ack_event;
};

struct ReceiverStepResult {
  ReceiverState state;
  ReceiverAction action;
  AckPacket ack;
  /// True when the c+1 threshold fired and the queue was emptied.
  bool queue_reset = false;
};

/// Application Send(m): flips ab and enters the synchronization phase.
/// Throws ContractViolation unless the sender is Idle and m is an App payload.
SenderState sender_begin_send(SenderState state, Payload m);

/// The packet the current phase repeats: (SYNCHRO, ab) or (m, ab).
DataPacket sender_emit(const SenderState& state);

/// Consumes one poll result. A matching ack advances ack_count; reaching the
/// ack threshold completes the phase.
SenderPollResult sender_poll(SenderState state, const ProtocolParams& params,
                             const std::optional<AckPacket>& polled);

/// One full iteration of the sending loop: emit, then poll.
SenderTickResult sender_tick(SenderState state, const ProtocolParams& params,
                             const std::optional<AckPacket>& polled);

/// Looks up `key` in the queue, inserting a zero-count entry if absent
/// (evicting the bottom entry when the queue already holds c+1), and promotes
/// the entry to the front. Returns the entry's counter.
int& queue_update(std::vector<QueueEntry>& queue, const Payload& payload,
                  AltBit ab, int capacity);

/// Total over every receiver state, including corrupted ones.
ReceiverStepResult receiver_on_packet(ReceiverState state,
                                      const ProtocolParams& params,
                                      const DataPacket& pkt);

/// Type invariants from the state definitions. Used by generators and tests.
bool is_valid(const SenderState& s, const ProtocolParams& params);
bool is_valid(const ReceiverState& r, const ProtocolParams& params);

}  // namespace sdlink
