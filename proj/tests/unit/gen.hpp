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

// Small seeded generators for property tests.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sdlink/sim.hpp"

namespace sdlink::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int between(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool coin() { return between(0, 1) == 1; }
  AltBit bit() { return AltBit{coin()}; }

  const std::string& pick(const std::vector<std::string>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<int>(v.size()) - 1))];
  }

  Payload payload(const std::vector<std::string>& alphabet) {
    if (between(0, static_cast<int>(alphabet.size())) == 0) {
      return Payload::synchro();
    }
    return Payload::app(pick(alphabet));
  }

  DataPacket data(const std::vector<std::string>& alphabet) {
    return DataPacket{payload(alphabet), bit()};
  }

  /// Any queue satisfying the type invariants, including unreachable ones.
  ReceiverState receiver(const ProtocolParams& params,
                         const std::vector<std::string>& alphabet) {
    ReceiverState r;
    r.last_delivered = bit();
    const int len = between(0, params.delivery_threshold());
    for (int i = 0; i < len * 3 && static_cast<int>(r.queue.size()) < len;
         ++i) {
      QueueEntry e{payload(alphabet), bit(),
                   between(0, params.delivery_threshold())};
      const bool dup = std::ranges::any_of(r.queue, [&](const QueueEntry& q) {
        return q.payload == e.payload && q.ab == e.ab;
      });
      if (!dup) r.queue.push_back(e);
    }
    return r;
  }

  std::vector<std::string> tokens(int n, const std::string& prefix = "m") {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Drives a configuration with uniformly chosen enabled steps.
template <Machine P>
struct RandomWalk {
  BasicConfiguration<P> cfg;
  std::vector<std::string> msgs;
  AppCursor app;
  std::vector<Event> events;

  RandomWalk(BasicConfiguration<P> init, std::vector<std::string> messages)
      : cfg(std::move(init)), msgs(std::move(messages)), app{msgs, 0, {}} {}

  /// Returns false when no step is enabled.
  bool step(Gen& g) {
    const auto steps = enabled_steps(cfg, app);
    if (steps.empty()) return false;
    const Step& s =
        steps[static_cast<std::size_t>(g.between(0, static_cast<int>(steps.size()) - 1))];
    apply_step(cfg, s, app, [&](Event&& e) {
      e.step = events.size();
      events.push_back(std::move(e));
    });
    return true;
  }
};

}  // namespace sdlink::testing
