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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "gen.hpp"
#include "sdlink/checker.hpp"
#include "sdlink/sim.hpp"

namespace sdlink {
namespace {

using testing::Gen;

std::vector<std::string> tokens(int n) { return Gen(0).tokens(n); }

std::uint64_t budget(int c, std::size_t n) {
  return 200ULL * static_cast<std::uint64_t>(6 * c + 4) *
         std::max<std::uint64_t>(n, 1);
}

int count(const std::vector<Event>& events, Event::Kind kind,
          std::optional<WireKind> dir = {}) {
  return static_cast<int>(std::ranges::count_if(events, [&](const Event& e) {
    return e.kind == kind && (!dir || e.dir == dir);
  }));
}

std::vector<std::string> delivered(const std::vector<Event>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == Event::Kind::MsgDelivered) out.push_back(*e.token);
  }
  return out;
}

TEST(Run, LockStepSendsSixCPlusFourPacketsPerMessage) {
  for (int c = 1; c <= 4; ++c) {
    const std::vector<std::string> msgs{"A"};
    auto t = run(clean_configuration<Sdl>(ProtocolParams(c)), LockStep{},
                 msgs, budget(c, 1));
    ASSERT_TRUE(t.quiescent) << c;
    EXPECT_EQ(count(t.events, Event::Kind::PacketSent, WireKind::Data),
              6 * c + 4);
    EXPECT_EQ(count(t.events, Event::Kind::PacketSent, WireKind::Ack),
              6 * c + 4);
    EXPECT_EQ(delivered(t.events), msgs);
    EXPECT_EQ(count(t.events, Event::Kind::AckDelivered), 1);
  }
}

TEST(Run, NothingToSendIsImmediatelyQuiescent) {
  auto t = run(clean_configuration<Sdl>(ProtocolParams(1)),
               RandomFair{.seed = 3}, std::vector<std::string>{}, 10);
  EXPECT_TRUE(t.quiescent);
  EXPECT_TRUE(t.events.empty());
  EXPECT_EQ(t.steps_taken, 0u);
}

TEST(Run, RejectsRepeatedTokensAndZeroBudget) {
  auto cfg = clean_configuration<Sdl>(ProtocolParams(1));
  EXPECT_THROW(run(cfg, LockStep{}, std::vector<std::string>{"A", "A"}, 100),
               std::invalid_argument);
  EXPECT_THROW(run(cfg, LockStep{}, std::vector<std::string>{"A"}, 0),
               std::invalid_argument);
  EXPECT_THROW(validate(RandomFair{.seed = 0, .p_deliver = 1.5}),
               std::invalid_argument);
}

TEST(Run, BudgetExhaustionIsNotQuiescent) {
  auto t = run(clean_configuration<Sdl>(ProtocolParams(1)), LockStep{},
               tokens(1), 5);
  EXPECT_FALSE(t.quiescent);
  EXPECT_EQ(t.steps_taken, 5u);
  EXPECT_EQ(check_trace(t).overall(), Verdict::Unknown);
}

TEST(Scenario, GhostTightDeliversGhostFirst) {
  auto s = scenario<Sdl>(ScenarioId::GhostTight);
  auto t = run(s.config, s.policy, s.app_messages,
               scenario_max_steps(ScenarioId::GhostTight));
  ASSERT_TRUE(t.quiescent);
  const auto r = delivered(t.events);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.front(), "g");
  std::vector<std::string> expect{"g"};
  expect.insert(expect.end(), s.app_messages.begin(), s.app_messages.end());
  EXPECT_EQ(r, expect);
  const auto check = check_sdl(t);
  EXPECT_EQ(check.verdict, Verdict::Pass);
  EXPECT_EQ(check.prefix, "g");
}

TEST(Scenario, DupTightDeliversGhostTokenTwice) {
  auto s = scenario<Sdl>(ScenarioId::DupTight);
  auto t = run(s.config, s.policy, s.app_messages,
               scenario_max_steps(ScenarioId::DupTight));
  ASSERT_TRUE(t.quiescent);
  const auto r = delivered(t.events);
  EXPECT_EQ(std::ranges::count(r, "g"), 2);
  EXPECT_EQ(r.front(), "g");
  const auto rep = check_trace(t, SpecBounds{0, 1, 1, 1});
  EXPECT_EQ(rep.duplication.verdict, Verdict::Pass);
  EXPECT_EQ(check_trace(t, SpecBounds{0, 0, 1, 1}).duplication.verdict,
            Verdict::Fail);
}

TEST(Scenario, ReorderTightDeliversSecondMessageFirst) {
  auto s = scenario<Sdl>(ScenarioId::ReorderTight);
  auto t = run(s.config, s.policy, s.app_messages,
               scenario_max_steps(ScenarioId::ReorderTight));
  ASSERT_TRUE(t.quiescent);
  ASSERT_EQ(s.app_messages.size(), 2u);
  EXPECT_EQ(delivered(t.events).front(), s.app_messages[1]);
  EXPECT_EQ(check_trace(t, SpecBounds{0, 1, 1, 1}).reordering.verdict,
            Verdict::Pass);
  EXPECT_EQ(check_trace(t, SpecBounds{0, 1, 1, 0}).reordering.verdict,
            Verdict::Fail);
}

TEST(Scenario, AbpFailDeliversTwoGhosts) {
  auto s = scenario<Abp>(ScenarioId::AbpFail);
  auto t = run(s.config, s.policy, s.app_messages,
               scenario_max_steps(ScenarioId::AbpFail));
  ASSERT_TRUE(t.quiescent);
  int ghosts = 0;
  for (const auto& tok : delivered(t.events)) {
    if (std::ranges::find(s.app_messages, tok) == s.app_messages.end()) {
      ++ghosts;
    }
  }
  EXPECT_GE(ghosts, 2);
  EXPECT_EQ(check_trace(t).creation.verdict, Verdict::Fail);
}

TEST(Scenario, NamesRoundTrip) {
  for (auto id : {ScenarioId::GhostTight, ScenarioId::DupTight,
                  ScenarioId::ReorderTight, ScenarioId::AbpFail}) {
    EXPECT_EQ(parse_scenario(to_string(id)), id);
  }
  EXPECT_FALSE(parse_scenario("nope"));
}

TEST(ArbitraryConfiguration, SeedDeterminesConfiguration) {
  const std::vector<std::string> alphabet{"A", "g"};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ProtocolParams params(1 + static_cast<int>(seed % 3));
    auto a = arbitrary_configuration<Sdl>(seed, params, alphabet);
    ASSERT_EQ(a, arbitrary_configuration<Sdl>(seed, params, alphabet));
    ASSERT_TRUE(is_valid(a));
    auto b = arbitrary_configuration<Abp>(seed, params, alphabet);
    ASSERT_TRUE(is_valid(b));
  }
}

// Seeds, capacities and loss rates drawn at random; every run is checked
// for determinism, replay consistency and (from clean) the full property.
TEST(RunProperty, ReplayDeterminismAndConsistency) {
  Gen g(31);
  for (int trial = 0; trial < 150; ++trial) {
    const int c = g.between(1, 3);
    const int n = g.between(0, 6);
    RandomFair policy{static_cast<std::uint64_t>(g.between(0, 1 << 20)),
                      0.2 + 0.7 * g.between(0, 10) / 10.0,
                      0.3 * g.between(0, 10) / 10.0, 0};
    const auto msgs = g.tokens(n);
    const bool arbitrary = g.coin();
    auto alphabet = msgs;
    alphabet.push_back("g");
    const auto init =
        arbitrary ? arbitrary_configuration<Sdl>(policy.seed, ProtocolParams(c),
                                                 alphabet)
                  : clean_configuration<Sdl>(ProtocolParams(c));
    const auto t = run(init, policy, msgs, budget(c, msgs.size()));
    const auto again = run(init, policy, msgs, budget(c, msgs.size()));
    ASSERT_EQ(t.events, again.events);
    ASSERT_EQ(t.config_final, again.config_final);
    ASSERT_EQ(replay_events(t), t.config_final);
    ASSERT_TRUE(t.quiescent) << "trial " << trial;
    ASSERT_TRUE(is_valid(t.config_final));
    for (std::size_t i = 1; i < t.events.size(); ++i) {
      ASSERT_LT(t.events[i - 1].step, t.events[i].step);
    }
    if (!arbitrary) {
      ASSERT_EQ(delivered(t.events), msgs);
      ASSERT_EQ(check_trace(t).overall(), Verdict::Pass);
    }
  }
}

TEST(RunProperty, ReplayRejectsTamperedLog) {
  const auto msgs = tokens(2);
  auto t = run(clean_configuration<Sdl>(ProtocolParams(1)),
               RandomFair{.seed = 9}, msgs, budget(1, 2));
  ASSERT_TRUE(t.quiescent);
  auto it = std::ranges::find_if(t.events, [](const Event& e) {
    return e.kind == Event::Kind::MsgDelivered;
  });
  ASSERT_NE(it, t.events.end());
  it->token = "zz";
  EXPECT_THROW(replay_events(t), ContractViolation);
}

TEST(RunProperty, EventsComeFromSendsOrGhosts) {
  Gen g(32);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = g.between(1, 3);
    const auto msgs = g.tokens(g.between(1, 4));
    auto alphabet = msgs;
    alphabet.push_back("g");
    const auto seed = static_cast<std::uint64_t>(trial);
    const auto init =
        arbitrary_configuration<Sdl>(seed, ProtocolParams(c), alphabet);
    const auto t = run(init, RandomFair{.seed = seed, .p_deliver = 0.6,
                                        .p_lose = 0.2},
                       msgs, budget(c, msgs.size()));
    std::map<std::pair<WireKind, DataPacket>, int> balance;
    for (const auto& p : init.chan_data.contents()) {
      ++balance[{WireKind::Data, p}];
    }
    for (const auto& p : init.chan_ack.contents()) {
      ++balance[{WireKind::Ack, DataPacket{p.payload, p.ab}}];
    }
    for (const auto& e : t.events) {
      if (!e.dir || !e.payload) continue;
      const std::pair key{*e.dir, DataPacket{*e.payload, *e.ab}};
      switch (e.kind) {
        case Event::Kind::PacketSent:
          ++balance[key];
          break;
        case Event::Kind::PacketDelivered:
        case Event::Kind::PacketLost:
        case Event::Kind::PacketEvicted:
          ASSERT_GT(balance[key], 0) << "trial " << trial;
          --balance[key];
          break;
        default:
          break;
      }
    }
  }
}

TEST(RunProperty, LockStepLivenessBound) {
  constexpr std::uint64_t kK0 = 4;
  for (int c = 1; c <= 4; ++c) {
    for (int n = 1; n <= 6; ++n) {
      const auto msgs = tokens(n);
      const std::uint64_t bound =
          static_cast<std::uint64_t>(6 * c + 4) * n * kK0;
      auto t = run(clean_configuration<Sdl>(ProtocolParams(c)), LockStep{},
                   msgs, bound);
      ASSERT_TRUE(t.quiescent) << c << " " << n;
      ASSERT_LE(t.steps_taken, bound);
      ASSERT_EQ(t.steps_taken,
                static_cast<std::uint64_t>(n) * (1 + 3 * (6 * c + 4)));
    }
  }
}

// With patience D, no packet of the current phase is resent more than D
// times in a row without the receiver taking a copy of it.
TEST(RunProperty, FairnessDischarge) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int c = 1 + static_cast<int>(seed % 3);
    const auto msgs = tokens(4);
    RandomFair policy{seed, 0.3, 0.3, 0};
    auto t = run(clean_configuration<Sdl>(ProtocolParams(c)), policy, msgs,
                 budget(c, msgs.size()));
    ASSERT_TRUE(t.quiescent) << seed;
    const int patience = default_patience(ProtocolParams(c));
    std::optional<DataPacket> current;
    int unanswered = 0;
    for (const auto& e : t.events) {
      if (e.kind == Event::Kind::PacketSent && e.dir == WireKind::Data) {
        DataPacket p{*e.payload, *e.ab};
        if (current != p) {
          current = p;
          unanswered = 0;
        }
        ++unanswered;
        ASSERT_LE(unanswered, patience + 1) << seed;
      } else if (e.kind == Event::Kind::PacketDelivered &&
                 e.dir == WireKind::Data && current &&
                 DataPacket{*e.payload, *e.ab} == *current) {
        unanswered = 0;
      }
    }
  }
}

TEST(ApplyStep, DisabledStepsThrow) {
  auto cfg = clean_configuration<Sdl>(ProtocolParams(1));
  const std::vector<std::string> msgs{"A"};
  AppCursor app{msgs, 0, {}};
  auto sink = [](Event&&) {};
  EXPECT_THROW(apply_step(cfg, Step::sender_send(), app, sink),
               ContractViolation);
  EXPECT_THROW(apply_step(cfg, Step::receive(0), app, sink),
               ContractViolation);
  EXPECT_THROW(apply_step(cfg, Step::drain(0), app, sink), ContractViolation);
  apply_step(cfg, Step::begin(), app, sink);
  EXPECT_THROW(apply_step(cfg, Step::begin(), app, sink), ContractViolation);
}

TEST(ApplyStep, EnabledStepsNeverThrowAndKeepValidity) {
  Gen g(33);
  const std::vector<std::string> alphabet{"A", "B", "g"};
  for (int trial = 0; trial < 300; ++trial) {
    ProtocolParams params(g.between(1, 3));
    testing::RandomWalk<Sdl> walk(
        arbitrary_configuration<Sdl>(static_cast<std::uint64_t>(trial),
                                     params, alphabet),
        {"A", "B"});
    for (int i = 0; i < 300 && walk.step(g); ++i) {
      ASSERT_TRUE(is_valid(walk.cfg));
    }
  }
}

}  // namespace
}  // namespace sdlink
