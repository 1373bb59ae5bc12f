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

// Exhaustive breadth-first exploration of every adversary choice at tiny
// scale, plus a brute-force evaluator for the four sequence properties.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlink/sim.hpp"

namespace sdlink {

enum class InitMode : std::uint8_t { CleanOnly, AllValidConfigurations };

std::string_view to_string(InitMode mode);
std::optional<InitMode> parse_init_mode(std::string_view name);

struct ExploreParams {
  int capacity = 1;
  std::vector<std::string> app_messages{"A"};
  /// Tokens ghosts and corrupted payloads are drawn from. Empty means the
  /// app messages plus one fresh token.
  std::vector<std::string> token_alphabet;
  int depth_bound = 200;
  InitMode init_mode = InitMode::CleanOnly;
  std::size_t max_witnesses = 1;
  /// Worker threads for successor generation. Counts do not depend on it.
  int jobs = 1;
};

/// The alphabet explore() actually uses.
std::vector<std::string> effective_alphabet(const ExploreParams& params);

template <Machine P>
struct Violation {
  BasicConfiguration<P> root;
  std::vector<Step> steps;
  std::vector<std::string> delivered;
  bool started_idle = false;
};

template <Machine P>
struct ExploreReport {
  std::uint64_t initial_states = 0;
  std::uint64_t visited_states = 0;
  std::uint64_t transitions = 0;
  /// Deepest BFS level that held a state.
  int max_depth = 0;
  bool exhausted = false;
  std::uint64_t violating_states = 0;
  /// Violating states whose root had an Idle sender.
  std::uint64_t violating_from_idle = 0;
  /// Shortest witnesses, in BFS order.
  std::vector<Violation<P>> witnesses;

  bool ok() const { return exhausted && violating_states == 0; }
};

/// Throws std::invalid_argument on bad parameters.
template <Machine P>
ExploreReport<P> explore(const ExploreParams& params);

/// The policy that replays a witness through run().
template <Machine P>
Scripted witness_policy(const Violation<P>& v) {
  return Scripted{v.steps, false};
}

/// Every valid configuration over `alphabet` (sender, receiver, channels).
template <Machine P>
std::vector<BasicConfiguration<P>> all_valid_configurations(
    ProtocolParams params, std::span<const std::string> alphabet);

enum class Property : std::uint8_t { Loss, Duplication, Creation, Reordering };

std::string_view to_string(Property p);

/// Literal quantifier expansion of one property. Requires |S|, |R| <= 6.
bool evaluate_formula(Property property, std::span<const std::string> sent,
                      std::span<const std::string> delivered, int bound);

}  // namespace sdlink
