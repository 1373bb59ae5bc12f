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

#include "sdlink/oracle.hpp"

namespace sdlink {
namespace {

std::vector<std::string> delivered(const std::vector<Event>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == Event::Kind::MsgDelivered) out.push_back(*e.token);
  }
  return out;
}

template <Machine P>
void expect_witnesses_replay(const ExploreReport<P>& rep,
                             const ExploreParams& params) {
  for (const auto& v : rep.witnesses) {
    auto t = run(v.root, witness_policy(v), params.app_messages,
                 v.steps.size() + 1);
    EXPECT_EQ(delivered(t.events), v.delivered);
    EXPECT_EQ(t.steps_taken, v.steps.size());
    EXPECT_EQ(v.started_idle, P::idle(v.root.sender));
  }
}

TEST(Explore, CleanStartOneMessage) {
  ExploreParams p;
  auto rep = explore<Sdl>(p);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.initial_states, 1u);
  EXPECT_EQ(rep.visited_states, 243u);
  EXPECT_EQ(rep.transitions, 777u);
  EXPECT_EQ(rep.max_depth, 37);
}

TEST(Explore, CleanStartTwoMessages) {
  ExploreParams p;
  p.app_messages = {"A", "B"};
  auto rep = explore<Sdl>(p);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.visited_states, 529u);
}

TEST(Explore, EffectiveAlphabetAddsFreshToken) {
  ExploreParams p;
  EXPECT_EQ(effective_alphabet(p), (std::vector<std::string>{"A", "g"}));
  p.token_alphabet = {"A"};
  EXPECT_EQ(effective_alphabet(p), (std::vector<std::string>{"A"}));
}

TEST(Explore, AllValidSingleTokenAlphabet) {
  ExploreParams p;
  p.token_alphabet = {"A"};
  p.init_mode = InitMode::AllValidConfigurations;
  p.max_witnesses = 4;
  auto rep = explore<Sdl>(p);
  EXPECT_TRUE(rep.exhausted);
  EXPECT_EQ(rep.initial_states, 254100u);
  EXPECT_EQ(rep.visited_states, 287784u);
  EXPECT_EQ(rep.transitions, 1368776u);
  // Every violation needs a sender found mid-Send at the start.
  EXPECT_EQ(rep.violating_states, 12u);
  EXPECT_EQ(rep.violating_from_idle, 0u);
  ASSERT_FALSE(rep.witnesses.empty());
  for (const auto& v : rep.witnesses) {
    EXPECT_FALSE(v.started_idle);
    EXPECT_TRUE(v.root.sender.current_payload);
  }
  expect_witnesses_replay(rep, p);
}

TEST(Explore, AbpBaselineFailsFromIdleStarts) {
  ExploreParams p;
  p.init_mode = InitMode::AllValidConfigurations;
  p.max_witnesses = 8;
  auto rep = explore<Abp>(p);
  EXPECT_TRUE(rep.exhausted);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.visited_states, 2578u);
  EXPECT_EQ(rep.violating_states, 84u);
  EXPECT_GT(rep.violating_from_idle, 0u);
  ASSERT_FALSE(rep.witnesses.empty());
  expect_witnesses_replay(rep, p);
}

TEST(Explore, AbpCleanStartIsFine) {
  ExploreParams p;
  p.app_messages = {"A", "B"};
  EXPECT_TRUE(explore<Abp>(p).ok());
}

TEST(Explore, ThreadCountDoesNotChangeCounts) {
  ExploreParams p;
  p.token_alphabet = {"A"};
  p.init_mode = InitMode::AllValidConfigurations;
  p.max_witnesses = 3;
  auto one = explore<Sdl>(p);
  p.jobs = 3;
  auto three = explore<Sdl>(p);
  EXPECT_EQ(one.visited_states, three.visited_states);
  EXPECT_EQ(one.transitions, three.transitions);
  EXPECT_EQ(one.violating_states, three.violating_states);
  ASSERT_EQ(one.witnesses.size(), three.witnesses.size());
  for (std::size_t i = 0; i < one.witnesses.size(); ++i) {
    EXPECT_EQ(one.witnesses[i].steps, three.witnesses[i].steps);
    EXPECT_EQ(one.witnesses[i].root, three.witnesses[i].root);
  }
}

TEST(Explore, DepthBoundReportsPartial) {
  ExploreParams p;
  p.depth_bound = 1;
  auto rep = explore<Sdl>(p);
  EXPECT_FALSE(rep.exhausted);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.visited_states, 2u);
}

TEST(Explore, RejectsBadParameters) {
  ExploreParams p;
  p.capacity = 0;
  EXPECT_THROW(explore<Sdl>(p), std::invalid_argument);
  p.capacity = 1;
  p.app_messages = {"A", "A"};
  EXPECT_THROW(explore<Sdl>(p), std::invalid_argument);
}

TEST(AllValid, EveryConfigurationIsValidAndDistinct) {
  const std::vector<std::string> alphabet{"A"};
  auto all = all_valid_configurations<Sdl>(ProtocolParams(1), alphabet);
  EXPECT_EQ(all.size(), 254100u);
  for (std::size_t i = 0; i < all.size(); i += 97) {
    ASSERT_TRUE(is_valid(all[i]));
  }
  auto abp = all_valid_configurations<Abp>(ProtocolParams(1), alphabet);
  for (const auto& c : abp) ASSERT_TRUE(is_valid(c));
  for (std::size_t i = 1; i < abp.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) ASSERT_FALSE(abp[i] == abp[j]);
  }
}

TEST(InitModeNames, RoundTrip) {
  EXPECT_EQ(parse_init_mode("clean"), InitMode::CleanOnly);
  EXPECT_EQ(parse_init_mode("all"), InitMode::AllValidConfigurations);
  EXPECT_EQ(to_string(InitMode::AllValidConfigurations), "all");
  EXPECT_FALSE(parse_init_mode("some"));
}

}  // namespace
}  // namespace sdlink
