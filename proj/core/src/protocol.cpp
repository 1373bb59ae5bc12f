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

#include "sdlink/protocol.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace sdlink {

std::string_view to_string(SenderPhase phase) {
  switch (phase) {
    case SenderPhase::Idle:
      return "idle";
    case SenderPhase::SynchroPhase:
      return "synchro";
    case SenderPhase::PayloadPhase:
      return "payload";
  }
  return "?";
}

SenderState sender_begin_send(SenderState state, Payload m) {
  if (state.phase != SenderPhase::Idle) {
    throw ContractViolation("sender_begin_send: a Send is already in progress");
  }
  if (!m.is_app()) {
    throw ContractViolation("sender_begin_send: payload must be App");
  }
  state.ab = state.ab.flipped();
  state.phase = SenderPhase::SynchroPhase;
  state.ack_count = 0;
  state.current_payload = std::move(m);
  return state;
}

DataPacket sender_emit(const SenderState& state) {
  switch (state.phase) {
    case SenderPhase::SynchroPhase:
      return DataPacket{Payload::synchro(), state.ab};
    case SenderPhase::PayloadPhase:
      if (!state.current_payload) {
        throw ContractViolation("sender_emit: payload phase without payload");
      }
      return DataPacket{*state.current_payload, state.ab};
    case SenderPhase::Idle:
      break;
  }
  throw ContractViolation("sender_emit: sender is Idle");
}

SenderPollResult sender_poll(SenderState state, const ProtocolParams& params,
                             const std::optional<AckPacket>& polled) {
  const DataPacket expected = sender_emit(state);
  if (polled && polled->ab == expected.ab &&
      polled->payload == expected.payload) {
    ++state.ack_count;
  }
  SenderPollResult out{std::move(state), std::nullopt};
  if (out.state.ack_count < params.ack_threshold()) return out;

  out.state.ack_count = 0;
  if (out.state.phase == SenderPhase::SynchroPhase) {
    out.state.ab = out.state.ab.flipped();
    out.state.phase = SenderPhase::PayloadPhase;
  } else {
    out.ack_event = std::move(out.state.current_payload);
    out.state.current_payload.reset();
    out.state.phase = SenderPhase::Idle;
  }
  return out;
}

SenderTickResult sender_tick(SenderState state, const ProtocolParams& params,
                             const std::optional<AckPacket>& polled) {
  DataPacket emit = sender_emit(state);
  auto [next, ack_event] = sender_poll(std::move(state), params, polled);
  return {std::move(next), std::move(emit), std::move(ack_event)};
}

int& queue_update(std::vector<QueueEntry>& queue, const Payload& payload,
                  AltBit ab, int capacity) {
  auto it = std::find_if(queue.begin(), queue.end(), [&](const QueueEntry& e) {
    return e.ab == ab && e.payload == payload;
  });
  if (it == queue.end()) {
    if (std::cmp_greater_equal(queue.size(), capacity + 1)) queue.pop_back();
    queue.insert(queue.begin(), QueueEntry{payload, ab, 0});
    return queue.front().count;
  }
  std::rotate(queue.begin(), it, it + 1);
  return queue.front().count;
}

ReceiverStepResult receiver_on_packet(ReceiverState state,
                                      const ProtocolParams& params,
                                      const DataPacket& pkt) {
  const int limit = params.delivery_threshold();
  int& count = queue_update(state.queue, pkt.payload, pkt.ab,
                            params.capacity());
  count = std::min(count + 1, limit);

  ReceiverStepResult out{std::move(state), ReceiverAction::none(),
                         AckPacket{pkt.payload, pkt.ab}, false};
  if (out.state.queue.front().count >= limit) {
    if (out.state.last_delivered != pkt.ab) {
      out.action = pkt.payload.is_synchro()
                       ? ReceiverAction::drop_synchro()
                       : ReceiverAction::deliver(pkt.payload);
      out.state.last_delivered = pkt.ab;
    }
    out.state.queue.clear();
    out.queue_reset = true;
  }
  return out;
}

bool is_valid(const SenderState& s, const ProtocolParams& params) {
  if (s.ack_count < 0 || s.ack_count >= params.ack_threshold()) return false;
  if (s.phase == SenderPhase::Idle) {
    return !s.current_payload && s.ack_count == 0;
  }
  return s.current_payload && s.current_payload->is_app();
}

bool is_valid(const ReceiverState& r, const ProtocolParams& params) {
  if (std::cmp_greater(r.queue.size(), params.delivery_threshold())) {
    return false;
  }
  std::set<std::pair<Payload, AltBit>> keys;
  for (const auto& e : r.queue) {
    if (e.count < 0 || e.count > params.delivery_threshold()) return false;
    if (!keys.emplace(e.payload, e.ab).second) return false;
  }
  return true;
}

}  // namespace sdlink
