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

#include <map>

#include "gen.hpp"
#include "sdlink/abp.hpp"
#include "sdlink/channel.hpp"

namespace sdlink {
namespace {

using testing::Gen;

const DataPacket kP{Payload::app("p"), kBitFalse};
const DataPacket kQ{Payload::app("q"), kBitTrue};

std::vector<DataPacket> items(const Channel<DataPacket>& ch) {
  return {ch.contents().begin(), ch.contents().end()};
}

TEST(ChanSend, FullChannelEvictsResident) {
  auto ch = init_with_ghosts<DataPacket>(1, std::vector{kP});
  auto r = chan_send(ch, kQ, ChannelChoice::evict(0));
  EXPECT_EQ(items(r.channel), std::vector{kQ});
  EXPECT_EQ(r.lost, kP);
}

TEST(ChanSend, FullChannelEvictsIncoming) {
  auto ch = init_with_ghosts<DataPacket>(1, std::vector{kP});
  auto r = chan_send(ch, kQ, ChannelChoice::evict_incoming());
  EXPECT_EQ(items(r.channel), std::vector{kP});
  EXPECT_EQ(r.lost, kQ);
}

TEST(ChanSend, UnderCapacityAppends) {
  auto r = chan_send(Channel<DataPacket>(2), kQ, std::nullopt);
  EXPECT_EQ(items(r.channel), std::vector{kQ});
  EXPECT_FALSE(r.lost);
}

TEST(ChanSend, ChoiceMustMatchFullness) {
  EXPECT_THROW(chan_send(Channel<DataPacket>(2), kQ, ChannelChoice::evict(0)),
               ContractViolation);
  auto full = init_with_ghosts<DataPacket>(1, std::vector{kP});
  EXPECT_THROW(chan_send(full, kQ, std::nullopt), ContractViolation);
  EXPECT_THROW(chan_send(full, kQ, ChannelChoice::evict(1)),
               ContractViolation);
  EXPECT_THROW(chan_send(full, kQ, ChannelChoice::deliver(0)),
               ContractViolation);
}

TEST(ChanSend, IdenticalPacketsCoexist) {
  Channel<DataPacket> ch(3);
  ch = chan_send(ch, kP, std::nullopt).channel;
  ch = chan_send(ch, kP, std::nullopt).channel;
  EXPECT_EQ(ch.size(), 2u);
}

TEST(ChanTake, AnyElementMayBeTaken) {
  auto ch = init_with_ghosts<DataPacket>(2, std::vector{kP, kQ});
  auto r = chan_take(ch, ChannelChoice::deliver(1));
  EXPECT_EQ(items(r.channel), std::vector{kP});
  EXPECT_EQ(r.packet, kQ);
}

TEST(ChanTake, NullEvenWhenNonEmpty) {
  auto ch = init_with_ghosts<DataPacket>(1, std::vector{kP});
  auto r = chan_take(ch, ChannelChoice::deliver_null());
  EXPECT_EQ(items(r.channel), std::vector{kP});
  EXPECT_FALSE(r.packet);
  auto e = chan_take(Channel<DataPacket>(1), ChannelChoice::deliver_null());
  EXPECT_TRUE(e.channel.empty());
  EXPECT_FALSE(e.packet);
}

TEST(ChanTake, OutOfRangeIsAContractViolation) {
  EXPECT_THROW(chan_take(Channel<DataPacket>(1), ChannelChoice::deliver(0)),
               ContractViolation);
}

TEST(ChanLose, RemovesChosenPacket) {
  auto ch = init_with_ghosts<DataPacket>(2, std::vector{kP, kQ});
  EXPECT_EQ(items(chan_lose(ch, ChannelChoice::lose(0))), std::vector{kQ});
  auto one = init_with_ghosts<DataPacket>(1, std::vector{kP});
  EXPECT_TRUE(chan_lose(one, ChannelChoice::lose(0)).empty());
  EXPECT_THROW(chan_lose(one, ChannelChoice::lose(1)), ContractViolation);
}

TEST(Ghosts, InitWithinCapacity) {
  const DataPacket gt{Payload::app("g"), kBitTrue};
  const DataPacket gf{Payload::app("g"), kBitFalse};
  EXPECT_EQ(init_with_ghosts<DataPacket>(2, std::vector{gt, gf}).size(), 2u);
  EXPECT_TRUE(init_with_ghosts<DataPacket>(1, std::span<const DataPacket>{})
                  .empty());
  const DataPacket h{Payload::app("h"), kBitFalse};
  EXPECT_THROW(init_with_ghosts<DataPacket>(1, std::vector{gt, h}),
               std::invalid_argument);
}

TEST(ChannelOrder, ContentsAreCanonical) {
  auto a = init_with_ghosts<DataPacket>(2, std::vector{kP, kQ});
  auto b = init_with_ghosts<DataPacket>(2, std::vector{kQ, kP});
  EXPECT_EQ(a, b);
}

// Random operation sequences: capacity, no fabrication, take removes one.
TEST(ChannelProperty, RandomOperations) {
  Gen g(21);
  const std::vector<std::string> alphabet{"a", "b"};
  for (int trial = 0; trial < 300; ++trial) {
    const int c = g.between(1, 4);
    std::vector<DataPacket> ghosts;
    for (int i = g.between(0, c); i > 0; --i) ghosts.push_back(g.data(alphabet));
    auto ch = init_with_ghosts<DataPacket>(c, ghosts);
    std::map<DataPacket, int> balance;  // packets put in minus taken out
    for (const auto& p : ghosts) ++balance[p];
    for (int op = 0; op < 200; ++op) {
      const std::size_t before = ch.size();
      switch (g.between(0, 2)) {
        case 0: {
          const auto pkt = g.data(alphabet);
          std::optional<ChannelChoice> choice;
          if (ch.full()) {
            const int k = g.between(0, static_cast<int>(ch.size()));
            choice = k == static_cast<int>(ch.size())
                         ? ChannelChoice::evict_incoming()
                         : ChannelChoice::evict(static_cast<std::size_t>(k));
          }
          auto r = chan_send(ch, pkt, choice);
          ++balance[pkt];
          if (r.lost) --balance[*r.lost];
          ASSERT_EQ(r.channel.size(), std::min(before + 1,
                                               static_cast<std::size_t>(c)));
          ch = std::move(r.channel);
          break;
        }
        case 1: {
          if (ch.empty() || g.coin()) {
            auto r = chan_take(ch, ChannelChoice::deliver_null());
            ASSERT_EQ(r.channel, ch);
            break;
          }
          const auto k = static_cast<std::size_t>(
              g.between(0, static_cast<int>(ch.size()) - 1));
          auto r = chan_take(ch, ChannelChoice::deliver(k));
          ASSERT_TRUE(r.packet);
          ASSERT_GT(balance[*r.packet], 0);
          --balance[*r.packet];
          ASSERT_EQ(r.channel.size(), before - 1);
          ASSERT_EQ(chan_take(ch, ChannelChoice::deliver(k)).packet,
                    r.packet);
          ch = std::move(r.channel);
          break;
        }
        default: {
          if (ch.empty()) break;
          const auto k = static_cast<std::size_t>(
              g.between(0, static_cast<int>(ch.size()) - 1));
          --balance[ch.at(k)];
          ch = chan_lose(ch, ChannelChoice::lose(k));
          ASSERT_EQ(ch.size(), before - 1);
        }
      }
      ASSERT_LE(ch.size(), static_cast<std::size_t>(c));
      ASSERT_TRUE(std::is_sorted(ch.contents().begin(), ch.contents().end()));
      std::map<DataPacket, int> held;
      for (const auto& p : ch.contents()) ++held[p];
      for (const auto& [p, n] : balance) {
        ASSERT_EQ(held[p], n);
      }
    }
  }
}

TEST(Abp, OneMatchingAckCompletesSend) {
  auto s = abp_sender_begin_send(AbpSenderState{}, Payload::app("A"));
  EXPECT_EQ(s.ab, kBitTrue);
  auto miss = abp_sender_tick(s, AckPacket{Payload::app("A"), kBitFalse});
  EXPECT_EQ(miss.state, s);
  EXPECT_EQ(miss.emit, (DataPacket{Payload::app("A"), kBitTrue}));
  auto hit = abp_sender_tick(s, AckPacket{Payload::app("A"), kBitTrue});
  EXPECT_EQ(hit.state.phase, AbpPhase::Idle);
  EXPECT_EQ(hit.ack_event, Payload::app("A"));
}

TEST(Abp, ReceiverDeliversOnBitChange) {
  AbpReceiverState r{kBitFalse};
  auto first = abp_receiver_on_packet(r, DataPacket{Payload::app("g"), kBitTrue});
  EXPECT_EQ(first.action, ReceiverAction::deliver(Payload::app("g")));
  EXPECT_EQ(first.ack, (AckPacket{Payload::app("g"), kBitTrue}));
  auto again =
      abp_receiver_on_packet(first.state, DataPacket{Payload::app("A"), kBitTrue});
  EXPECT_EQ(again.action, ReceiverAction::none());
  EXPECT_FALSE(again.queue_reset);
}

}  // namespace
}  // namespace sdlink
