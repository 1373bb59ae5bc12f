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

// Post-hoc decision procedures over the sent sequence S and the delivered
// sequence R of one execution.
//
// Notation: W^j is the length-j prefix of W, W_i is W with its first i
// elements removed, and W^* is any sequence m0^k0 m1^k1 ... (each k >= 0).
// With bounds (alpha, beta, gamma, delta):
//
//   loss         exists a <= alpha: every m in S_a occurs in R
//   duplication  exists b <= beta:  every m in S delivered twice or more
//                                   occurs in R^b
//   creation     exists c <= gamma: every m in R that is not in S occurs
//                                   in R^c
//   reordering   exists d <= delta: R_d is in S^*
//
// Messages are compared by token content. Each check reports the least bound
// for which its formula holds, so verdicts are monotone in the bound.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sdlink/sim.hpp"

namespace sdlink {

enum class Verdict : std::uint8_t { Pass, Fail, Unknown };

std::string_view to_string(Verdict v);

struct SpecBounds {
  int alpha = 0;
  int beta = 1;
  int gamma = 1;
  int delta = 1;

  friend bool operator==(const SpecBounds&, const SpecBounds&) = default;
};

struct Occurrence {
  enum class Origin : std::uint8_t { AppSent, DeliveredAt };

  std::string token;
  Origin origin = Origin::AppSent;
  /// The AppSend seq for sent messages, the event step for deliveries.
  std::int64_t index = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

class MsgSequence {
 public:
  MsgSequence() = default;
  explicit MsgSequence(std::vector<Occurrence> items)
      : items_(std::move(items)) {}

  std::span<const Occurrence> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  std::vector<std::string> tokens() const;

  /// W^j.
  MsgSequence prefix(std::size_t j) const;
  /// W_i: drops the first i elements.
  MsgSequence suffix(std::size_t i) const;

  void push_back(Occurrence o) { items_.push_back(std::move(o)); }

  friend bool operator==(const MsgSequence&, const MsgSequence&) = default;

 private:
  std::vector<Occurrence> items_;
};

struct Projection {
  MsgSequence sent;
  MsgSequence delivered;
  /// Seq numbers whose DeliverAck reached the application.
  std::set<std::int64_t> acked;
};

/// S from AppSend events, R from MsgDelivered events (dropped
/// synchronization packets never reach R).
Projection project(std::span<const Event> events);

struct PropertyResult {
  Verdict verdict = Verdict::Unknown;
  int bound = 0;
  /// Smallest bound for which the formula holds on these sequences.
  std::optional<int> least_bound;
  /// Offending positions: in S for loss, in R for the other properties.
  std::vector<std::size_t> witness;
};

using Tokens = std::span<const std::string>;

/// Loss with every sent message required to arrive.
PropertyResult check_loss(Tokens sent, Tokens delivered, int alpha);
/// Loss where only sent messages with `required[i]` set must arrive.
PropertyResult check_loss(Tokens sent, Tokens delivered, int alpha,
                          std::span<const bool> required);
PropertyResult check_duplication(Tokens sent, Tokens delivered, int beta);
PropertyResult check_creation(Tokens sent, Tokens delivered, int gamma);
PropertyResult check_reordering(Tokens sent, Tokens delivered, int delta);

/// Whether `tail` parses as sent^*. Greedy with backtracking over block
/// boundaries (needed only when a token repeats within `sent`).
bool parses_as_star(Tokens sent, Tokens tail);

struct SdlResult {
  Verdict verdict = Verdict::Unknown;
  /// The extra leading token when R = m.S (and R != S).
  std::optional<std::string> prefix;
};

/// R = S, or R = m.S for a single arbitrary m.
SdlResult check_sdl(Tokens sent, Tokens delivered);

struct SpecReport {
  SpecBounds bounds;
  bool quiescent = false;
  PropertyResult loss;
  PropertyResult duplication;
  PropertyResult creation;
  PropertyResult reordering;
  SdlResult characterization;

  /// All four properties hold at the requested bounds.
  Verdict overall() const;
};

/// Evaluates every property on a trace's event log. Non-quiescent traces get
/// Unknown verdicts throughout. Throws std::logic_error if the
/// characterization holds while one of the (0,1,1,1) checks fails, which
/// would mean the checker itself is wrong.
SpecReport check_trace(std::span<const Event> events, bool quiescent,
                       const SpecBounds& bounds);

template <Machine P>
SpecReport check_trace(const BasicTrace<P>& trace,
                       const SpecBounds& bounds = {}) {
  return check_trace(trace.events, trace.quiescent, bounds);
}

template <Machine P>
SdlResult check_sdl(const BasicTrace<P>& trace) {
  return check_trace(trace.events, trace.quiescent, SpecBounds{})
      .characterization;
}

}  // namespace sdlink
