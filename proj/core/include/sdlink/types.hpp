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

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdlink {

/// Raised when a caller breaks an operation's precondition. Transition
/// functions never swallow these; they indicate a harness bug, not a fault
/// the protocol is expected to tolerate.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class PayloadKind : std::uint8_t { Synchro = 0, App = 1 };

/// Either the synchronization marker or an opaque application token.
///
/// The marker is distinguished by its kind tag, never by a reserved token
/// value, so every byte string is a legal application token.
class Payload {
 public:
  static Payload synchro() { return Payload(PayloadKind::Synchro, {}); }
  static Payload app(std::string token) {
    return Payload(PayloadKind::App, std::move(token));
  }

  PayloadKind kind() const noexcept { return kind_; }
  bool is_synchro() const noexcept { return kind_ == PayloadKind::Synchro; }
  bool is_app() const noexcept { return kind_ == PayloadKind::App; }
  const std::string& token() const noexcept { return token_; }

  friend bool operator==(const Payload&, const Payload&) = default;
  friend std::strong_ordering operator<=>(const Payload&,
                                          const Payload&) = default;

 private:
  Payload(PayloadKind kind, std::string token)
      : kind_(kind), token_(std::move(token)) {}

  PayloadKind kind_;
  std::string token_;
};

std::ostream& operator<<(std::ostream& os, const Payload& p);

struct AltBit {
  bool value = false;

  constexpr AltBit flipped() const noexcept { return AltBit{!value}; }

  friend constexpr bool operator==(AltBit, AltBit) = default;
  friend constexpr std::strong_ordering operator<=>(AltBit, AltBit) = default;
};

inline constexpr AltBit kBitFalse{false};
inline constexpr AltBit kBitTrue{true};

/// A packet on the sender -> receiver channel.
struct DataPacket {
  Payload payload;
  AltBit ab;

  friend bool operator==(const DataPacket&, const DataPacket&) = default;
  friend std::strong_ordering operator<=>(const DataPacket&,
                                          const DataPacket&) = default;
};

/// A packet on the receiver -> sender channel, echoing a received
/// (payload, ab) pair.
struct AckPacket {
  Payload payload;
  AltBit ab;

  friend bool operator==(const AckPacket&, const AckPacket&) = default;
  friend std::strong_ordering operator<=>(const AckPacket&,
                                          const AckPacket&) = default;
};

std::ostream& operator<<(std::ostream& os, const DataPacket& p);
std::ostream& operator<<(std::ostream& os, const AckPacket& p);

enum class WireKind : std::uint8_t { Data, Ack };

template <class Packet>
struct WireKindOf;
template <>
struct WireKindOf<DataPacket> {
  static constexpr WireKind value = WireKind::Data;
};
template <>
struct WireKindOf<AckPacket> {
  static constexpr WireKind value = WireKind::Ack;
};

std::string_view to_string(WireKind kind);

/// Channel capacity and the two thresholds derived from it. The thresholds
/// are computed, never stored, so they cannot drift from the capacity.
class ProtocolParams {
 public:
  explicit ProtocolParams(int capacity) : capacity_(capacity) {
    if (capacity < 1) {
      throw std::invalid_argument("channel capacity must be >= 1");
    }
  }

  int capacity() const noexcept { return capacity_; }
  /// Matching acknowledgments the sender needs before leaving a phase.
  int ack_threshold() const noexcept { return 3 * capacity_ + 2; }
  /// Copies of a packet the receiver needs before acting on it.
  int delivery_threshold() const noexcept { return capacity_ + 1; }

  friend bool operator==(const ProtocolParams&,
                         const ProtocolParams&) = default;

 private:
  int capacity_;
};

}  // namespace sdlink
