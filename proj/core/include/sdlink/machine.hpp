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

#pragma once

#include <concepts>
#include <optional>
#include <string_view>

#include "sdlink/abp.hpp"
#include "sdlink/protocol.hpp"

namespace sdlink {

enum class ProtocolKind : std::uint8_t { Sdl, Abp };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

/// Adapter every protocol implements so the simulator and the explorer can
/// drive it without knowing which one it is.
template <class P>
concept Machine = requires(typename P::Sender s, typename P::Receiver r,
                           const ProtocolParams& params, Payload m,
                           std::optional<AckPacket> polled, DataPacket pkt) {
  { P::kKind } -> std::convertible_to<ProtocolKind>;
  { P::idle(s) } -> std::same_as<bool>;
  { P::begin_send(s, m) } -> std::same_as<typename P::Sender>;
  { P::emit(s) } -> std::same_as<DataPacket>;
  P::poll(s, params, polled);
  P::on_packet(r, params, pkt);
  { P::valid(s, params) } -> std::same_as<bool>;
  { P::valid(r, params) } -> std::same_as<bool>;
};

struct Sdl {
  using Sender = SenderState;
  using Receiver = ReceiverState;
  static constexpr ProtocolKind kKind = ProtocolKind::Sdl;

  static bool idle(const Sender& s) { return s.phase == SenderPhase::Idle; }
  static Sender begin_send(Sender s, Payload m) {
    return sender_begin_send(std::move(s), std::move(m));
  }
  static DataPacket emit(const Sender& s) { return sender_emit(s); }
  static SenderPollResult poll(Sender s, const ProtocolParams& params,
                               const std::optional<AckPacket>& polled) {
    return sender_poll(std::move(s), params, polled);
  }
  static ReceiverStepResult on_packet(Receiver r, const ProtocolParams& params,
                                      const DataPacket& pkt) {
    return receiver_on_packet(std::move(r), params, pkt);
  }
  static bool valid(const Sender& s, const ProtocolParams& params) {
    return is_valid(s, params);
  }
  static bool valid(const Receiver& r, const ProtocolParams& params) {
    return is_valid(r, params);
  }
};

struct Abp {
  using Sender = AbpSenderState;
  using Receiver = AbpReceiverState;
  static constexpr ProtocolKind kKind = ProtocolKind::Abp;

  static bool idle(const Sender& s) { return s.phase == AbpPhase::Idle; }
  static Sender begin_send(Sender s, Payload m) {
    return abp_sender_begin_send(std::move(s), std::move(m));
  }
  static DataPacket emit(const Sender& s) { return abp_sender_emit(s); }
  static AbpSenderPollResult poll(Sender s, const ProtocolParams&,
                                  const std::optional<AckPacket>& polled) {
    return abp_sender_poll(std::move(s), polled);
  }
  static AbpReceiverStepResult on_packet(Receiver r, const ProtocolParams&,
                                         const DataPacket& pkt) {
    return abp_receiver_on_packet(r, pkt);
  }
  static bool valid(const Sender& s, const ProtocolParams&) {
    return is_valid(s);
  }
  static bool valid(const Receiver&, const ProtocolParams&) { return true; }
};

static_assert(Machine<Sdl>);
static_assert(Machine<Abp>);

}  // namespace sdlink
