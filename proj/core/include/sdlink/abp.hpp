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

// Textbook stop-and-wait alternating-bit protocol behind the same step
// interface as the stabilizing machines. One matching ack completes a send;
// the receiver delivers the first packet whose bit differs from the last one
// it acted on. It is only pseudo-stabilizing and exists as a negative control.

#pragma once

#include <optional>

#include "sdlink/protocol.hpp"
#include "sdlink/types.hpp"

namespace sdlink {

enum class AbpPhase : std::uint8_t { Idle, Sending };

std::string_view to_string(AbpPhase phase);

struct AbpSenderState {
  AltBit ab;
  AbpPhase phase = AbpPhase::Idle;
  std::optional<Payload> current_payload;

  friend bool operator==(const AbpSenderState&,
                         const AbpSenderState&) = default;
};

struct AbpReceiverState {
  AltBit last_delivered;

  friend bool operator==(const AbpReceiverState&,
                         const AbpReceiverState&) = default;
};

struct AbpSenderPollResult {
  AbpSenderState state;
  std::optional<Payload> ack_event;
};

struct AbpSenderTickResult {
  AbpSenderState state;
  std::optional<DataPacket> emit;
  std::optional<Payload> ack_event;
};

struct AbpReceiverStepResult {
  AbpReceiverState state;
  ReceiverAction action;
  AckPacket ack;
  bool queue_reset = false;  // always false; kept for interface parity
};

AbpSenderState abp_sender_begin_send(AbpSenderState state, Payload m);
DataPacket abp_sender_emit(const AbpSenderState& state);
AbpSenderPollResult abp_sender_poll(AbpSenderState state,
                                    const std::optional<AckPacket>& polled);
AbpSenderTickResult abp_sender_tick(AbpSenderState state,
                                    const std::optional<AckPacket>& polled);
AbpReceiverStepResult abp_receiver_on_packet(AbpReceiverState state,
                                             const DataPacket& pkt);

bool is_valid(const AbpSenderState& s);

}  // namespace sdlink
