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

#include "sdlink/abp.hpp"

#include <utility>

namespace sdlink {

std::string_view to_string(AbpPhase phase) {
  return phase == AbpPhase::Idle ? "idle" : "sending";
}

AbpSenderState abp_sender_begin_send(AbpSenderState state, Payload m) {
  if (state.phase != AbpPhase::Idle) {
    throw ContractViolation("abp_sender_begin_send: a Send is in progress");
  }
  if (!m.is_app()) {
    throw ContractViolation("abp_sender_begin_send: payload must be App");
  }
  state.ab = state.ab.flipped();
  state.phase = AbpPhase::Sending;
  state.current_payload = std::move(m);
  return state;
}

DataPacket abp_sender_emit(const AbpSenderState& state) {
  if (state.phase != AbpPhase::Sending || !state.current_payload) {
    throw ContractViolation("abp_sender_emit: sender is Idle");
  }
  return DataPacket{*state.current_payload, state.ab};
}

AbpSenderPollResult abp_sender_poll(AbpSenderState state,
                                    const std::optional<AckPacket>& polled) {
  const DataPacket expected = abp_sender_emit(state);
  AbpSenderPollResult out{std::move(state), std::nullopt};
  if (polled && polled->ab == expected.ab &&
      polled->payload == expected.payload) {
    out.ack_event = std::move(out.state.current_payload);
    out.state.current_payload.reset();
    out.state.phase = AbpPhase::Idle;
  }
  return out;
}

AbpSenderTickResult abp_sender_tick(AbpSenderState state,
                                    const std::optional<AckPacket>& polled) {
  DataPacket emit = abp_sender_emit(state);
  auto [next, ack_event] = abp_sender_poll(std::move(state), polled);
  return {std::move(next), std::move(emit), std::move(ack_event)};
}

AbpReceiverStepResult abp_receiver_on_packet(AbpReceiverState state,
                                             const DataPacket& pkt) {
  AbpReceiverStepResult out{state, ReceiverAction::none(),
                            AckPacket{pkt.payload, pkt.ab}, false};
  if (state.last_delivered != pkt.ab) {
    out.action = pkt.payload.is_synchro()
                     ? ReceiverAction::drop_synchro()
                     : ReceiverAction::deliver(pkt.payload);
    out.state.last_delivered = pkt.ab;
  }
  return out;
}

bool is_valid(const AbpSenderState& s) {
  if (s.phase == AbpPhase::Idle) return !s.current_payload;
  return s.current_payload && s.current_payload->is_app();
}

}  // namespace sdlink
