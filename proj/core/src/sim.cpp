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

#include "sdlink/sim.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

namespace sdlink {

std::string_view to_string(ProtocolKind kind) {
  return kind == ProtocolKind::Sdl ? "sdl" : "abp";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  if (name == "sdl") return ProtocolKind::Sdl;
  if (name == "abp") return ProtocolKind::Abp;
  return std::nullopt;
}

std::string_view to_string(Step::Kind kind) {
  switch (kind) {
    case Step::Kind::Begin:
      return "begin";
    case Step::Kind::SenderSend:
      return "sender_send";
    case Step::Kind::SenderPoll:
      return "sender_poll";
    case Step::Kind::Receive:
      return "receive";
    case Step::Kind::Lose:
      return "lose";
    case Step::Kind::Drain:
      return "drain";
  }
  return "?";
}

namespace {

constexpr std::array<std::pair<Event::Kind, std::string_view>, 10>
    kEventNames{{
        {Event::Kind::AppSend, "AppSend"},
        {Event::Kind::PacketSent, "PacketSent"},
        {Event::Kind::PacketDelivered, "PacketDelivered"},
        {Event::Kind::PacketLost, "PacketLost"},
        {Event::Kind::PacketEvicted, "PacketEvicted"},
        {Event::Kind::NullPoll, "NullPoll"},
        {Event::Kind::MsgDelivered, "MsgDelivered"},
        {Event::Kind::SynchroDropped, "SynchroDropped"},
        {Event::Kind::AckDelivered, "AckDelivered"},
        {Event::Kind::QueueReset, "QueueReset"},
    }};

constexpr std::array<std::pair<ScenarioId, std::string_view>, 4>
    kScenarioNames{{
        {ScenarioId::GhostTight, "ghost-tight"},
        {ScenarioId::DupTight, "dup-tight"},
        {ScenarioId::ReorderTight, "reorder-tight"},
        {ScenarioId::AbpFail, "abp-fail"},
    }};

}  // namespace

std::string_view to_string(Event::Kind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<Event::Kind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kEventNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ScenarioId id) {
  for (const auto& [k, name] : kScenarioNames) {
    if (k == id) return name;
  }
  return "?";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  for (const auto& [k, n] : kScenarioNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void validate(const SchedulerPolicy& policy) {
  if (const auto* rf = std::get_if<RandomFair>(&policy)) {
    if (!(rf->p_deliver > 0.0 && rf->p_deliver <= 1.0)) {
      throw std::invalid_argument("p_deliver must be in (0, 1]");
    }
    if (!(rf->p_lose >= 0.0 && rf->p_lose < 1.0)) {
      throw std::invalid_argument("p_lose must be in [0, 1)");
    }
    if (rf->patience < 0) {
      throw std::invalid_argument("patience must be >= 1 (0 = default)");
    }
  }
}

// --- step enumeration ------------------------------------------------------

namespace {

template <class Packet>
std::vector<std::size_t> distinct_indices(const Channel<Packet>& ch) {
  std::vector<std::size_t> out;
  const auto items = ch.contents();
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k == 0 || !(items[k] == items[k - 1])) out.push_back(k);
  }
  return out;
}

template <class Packet>
std::vector<std::optional<ChannelChoice>> overflow_choices(
    const Channel<Packet>& ch) {
  if (!ch.full()) return {std::nullopt};
  std::vector<std::optional<ChannelChoice>> out;
  for (std::size_t k : distinct_indices(ch)) {
    out.emplace_back(ChannelChoice::evict(k));
  }
  out.emplace_back(ChannelChoice::evict_incoming());
  return out;
}

AckPacket ack_for(const DataPacket& p) { return AckPacket{p.payload, p.ab}; }

}  // namespace

template <Machine P>
std::vector<Step> enabled_steps(const BasicConfiguration<P>& cfg,
                                const AppCursor& app) {
  std::vector<Step> out;
  const bool idle = P::idle(cfg.sender);
  const bool work_left = app.next < app.messages.size();
  if (idle && work_left) out.push_back(Step::begin());
  if (!idle && cfg.cursor == SenderCursor::AtSend) {
    for (const auto& ev : overflow_choices(cfg.chan_data)) {
      out.push_back(Step::sender_send(ev));
    }
  }
  if (!idle && cfg.cursor == SenderCursor::AtPoll) {
    out.push_back(Step::sender_poll(ChannelChoice::deliver_null()));
    for (std::size_t k : distinct_indices(cfg.chan_ack)) {
      out.push_back(Step::sender_poll(ChannelChoice::deliver(k)));
    }
  }
  if (!cfg.chan_data.empty()) {
    const auto acks = overflow_choices(cfg.chan_ack);
    for (std::size_t k : distinct_indices(cfg.chan_data)) {
      for (const auto& ev : acks) out.push_back(Step::receive(k, ev));
    }
  }
  for (std::size_t k : distinct_indices(cfg.chan_data)) {
    out.push_back(Step::lose(WireKind::Data, k));
  }
  for (std::size_t k : distinct_indices(cfg.chan_ack)) {
    out.push_back(Step::lose(WireKind::Ack, k));
  }
  if (idle && !work_left) {
    for (std::size_t k : distinct_indices(cfg.chan_ack)) {
      out.push_back(Step::drain(k));
    }
  }
  return out;
}

template <Machine P>
std::optional<Step> lockstep_step(const BasicConfiguration<P>& cfg,
                                  const AppCursor& app) {
  const bool idle = P::idle(cfg.sender);
  if (idle && app.next < app.messages.size()) return Step::begin();
  if (!idle && cfg.cursor == SenderCursor::AtSend) {
    std::optional<ChannelChoice> evict;
    if (cfg.chan_data.full()) evict = ChannelChoice::evict(0);
    return Step::sender_send(evict);
  }
  if (!cfg.chan_data.empty()) {
    std::size_t k = 0;
    if (!idle) k = cfg.chan_data.find(P::emit(cfg.sender)).value_or(0);
    std::optional<ChannelChoice> evict;
    if (cfg.chan_ack.full()) evict = ChannelChoice::evict(0);
    return Step::receive(k, evict);
  }
  if (!idle && cfg.cursor == SenderCursor::AtPoll) {
    if (cfg.chan_ack.empty()) {
      return Step::sender_poll(ChannelChoice::deliver_null());
    }
    const auto k = cfg.chan_ack.find(ack_for(P::emit(cfg.sender)));
    return Step::sender_poll(ChannelChoice::deliver(k.value_or(0)));
  }
  if (idle && !cfg.chan_ack.empty()) return Step::drain(0);
  return std::nullopt;
}

// --- schedulers ------------------------------------------------------------

namespace {

/// What a scheduler wants to do next.
struct Decision {
  enum class Kind : std::uint8_t { Apply, NullReceive, Stop };
  Kind kind = Kind::Stop;
  Step step;

  static Decision apply(Step s) { return {Kind::Apply, std::move(s)}; }
  static Decision null_receive() { return {Kind::NullReceive, {}}; }
  static Decision stop() { return {Kind::Stop, {}}; }
};

/// Random adversary with an operational fairness bound: once the current
/// phase's packet has been sent `patience` times without the receiver getting
/// a copy, the next step delivers one (and the ack it triggers survives
/// overflow). Symmetrically for polls that keep missing a matching ack.
template <Machine P>
class RandomFairScheduler {
 public:
  RandomFairScheduler(const RandomFair& policy, const ProtocolParams& params)
      : policy_(policy),
        patience_(policy.patience > 0 ? policy.patience
                                      : default_patience(params)),
        rng_(policy.seed) {}

  Decision next(const BasicConfiguration<P>& cfg, const AppCursor& app) {
    const bool idle = P::idle(cfg.sender);
    const bool work_left = app.next < app.messages.size();
    if (idle && work_left) return Decision::apply(Step::begin());
    track_phase(cfg);

    if (!idle && data_resends_ >= patience_) {
      if (auto k = cfg.chan_data.find(*tracked_)) {
        data_resends_ = 0;
        return Decision::apply(Step::receive(*k, resident_victim(cfg.chan_ack)));
      }
    }
    if (!idle && cfg.cursor == SenderCursor::AtPoll &&
        poll_misses_ >= patience_) {
      if (auto k = cfg.chan_ack.find(ack_for(*tracked_))) {
        poll_misses_ = 0;
        return Decision::apply(Step::sender_poll(ChannelChoice::deliver(*k)));
      }
    }

    const bool any_packet = !cfg.chan_data.empty() || !cfg.chan_ack.empty();
    if (policy_.p_lose > 0.0 && any_packet && chance(policy_.p_lose)) {
      WireKind dir = WireKind::Data;
      if (cfg.chan_data.empty()) {
        dir = WireKind::Ack;
      } else if (!cfg.chan_ack.empty() && chance(0.5)) {
        dir = WireKind::Ack;
      }
      const std::size_t n = dir == WireKind::Data ? cfg.chan_data.size()
                                                  : cfg.chan_ack.size();
      return Decision::apply(Step::lose(dir, below(n)));
    }

    const bool sender_can = !idle || (!work_left && !cfg.chan_ack.empty());
    const bool receiver_can = !cfg.chan_data.empty();
    if (!sender_can && !receiver_can) return Decision::stop();
    const bool pick_sender = sender_can && (!receiver_can || chance(0.5));

    if (pick_sender) {
      if (idle) return Decision::apply(Step::drain(below(cfg.chan_ack.size())));
      if (cfg.cursor == SenderCursor::AtSend) {
        ++data_resends_;
        std::optional<ChannelChoice> evict;
        if (cfg.chan_data.full()) {
          evict = data_resends_ >= patience_
                      ? resident_victim(cfg.chan_data)
                      : any_victim(cfg.chan_data);
        }
        return Decision::apply(Step::sender_send(evict));
      }
      if (!cfg.chan_ack.empty() && chance(policy_.p_deliver)) {
        const std::size_t k = below(cfg.chan_ack.size());
        if (cfg.chan_ack.at(k) == ack_for(*tracked_)) {
          poll_misses_ = 0;
        } else {
          ++poll_misses_;
        }
        return Decision::apply(Step::sender_poll(ChannelChoice::deliver(k)));
      }
      ++poll_misses_;
      return Decision::apply(Step::sender_poll(ChannelChoice::deliver_null()));
    }

    if (!chance(policy_.p_deliver)) return Decision::null_receive();
    const std::size_t k = below(cfg.chan_data.size());
    if (tracked_ && cfg.chan_data.at(k) == *tracked_) data_resends_ = 0;
    std::optional<ChannelChoice> evict;
    if (cfg.chan_ack.full()) evict = any_victim(cfg.chan_ack);
    return Decision::apply(Step::receive(k, evict));
  }

 private:
  void track_phase(const BasicConfiguration<P>& cfg) {
    if (P::idle(cfg.sender)) {
      tracked_.reset();
      return;
    }
    DataPacket out = P::emit(cfg.sender);
    if (!tracked_ || !(*tracked_ == out)) {
      tracked_ = std::move(out);
      data_resends_ = 0;
      poll_misses_ = 0;
    }
  }

  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  template <class Packet>
  std::optional<ChannelChoice> resident_victim(const Channel<Packet>& ch) {
    if (!ch.full()) return std::nullopt;
    return ChannelChoice::evict(below(ch.size()));
  }

  template <class Packet>
  ChannelChoice any_victim(const Channel<Packet>& ch) {
    const std::size_t k = below(ch.size() + 1);
    return k == ch.size() ? ChannelChoice::evict_incoming()
                          : ChannelChoice::evict(k);
  }

  RandomFair policy_;
  int patience_;
  std::mt19937_64 rng_;
  std::optional<DataPacket> tracked_;
  int data_resends_ = 0;
  int poll_misses_ = 0;
};

template <Machine P>
class Recorder {
 public:
  explicit Recorder(std::vector<Event>& events) : events_(events) {}
  void operator()(Event&& e) {
    e.step = events_.size();
    events_.push_back(std::move(e));
  }

 private:
  std::vector<Event>& events_;
};

void check_distinct(std::span<const std::string> tokens) {
  std::set<std::string_view> seen;
  for (const auto& t : tokens) {
    if (!seen.insert(t).second) {
      throw std::invalid_argument("app message tokens must be distinct: " + t);
    }
  }
}

}  // namespace

template <Machine P>
BasicTrace<P> run(const BasicConfiguration<P>& init,
                  const SchedulerPolicy& policy,
                  std::span<const std::string> app_messages,
                  std::uint64_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be > 0");
  if (!is_valid(init)) {
    throw std::invalid_argument("initial configuration violates invariants");
  }
  validate(policy);
  check_distinct(app_messages);

  BasicTrace<P> trace;
  trace.config_init = init;
  trace.policy = policy;
  trace.app_messages.assign(app_messages.begin(), app_messages.end());
  if (const auto* rf = std::get_if<RandomFair>(&policy)) trace.seed = rf->seed;

  BasicConfiguration<P> cfg = init;
  AppCursor app{trace.app_messages, 0, std::nullopt};
  Recorder<P> record(trace.events);

  std::optional<RandomFairScheduler<P>> random;
  if (const auto* rf = std::get_if<RandomFair>(&policy)) {
    random.emplace(*rf, init.params);
  }
  const Scripted* script = std::get_if<Scripted>(&policy);
  std::size_t script_pos = 0;

  std::uint64_t steps = 0;
  while (!is_quiescent(cfg, app) && steps < max_steps) {
    Decision d;
    if (random) {
      d = random->next(cfg, app);
    } else if (script && script_pos < script->steps.size()) {
      d = Decision::apply(script->steps[script_pos++]);
    } else if (script && !script->then_lockstep) {
      d = Decision::stop();
    } else {
      auto s = lockstep_step(cfg, app);
      d = s ? Decision::apply(*s) : Decision::stop();
    }
    if (d.kind == Decision::Kind::Stop) break;
    ++steps;
    if (d.kind == Decision::Kind::Apply) apply_step(cfg, d.step, app, record);
  }

  trace.steps_taken = steps;
  trace.quiescent = is_quiescent(cfg, app);
  trace.config_final = std::move(cfg);
  return trace;
}

// --- arbitrary configurations ----------------------------------------------

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  int between(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool coin() { return between(0, 1) == 1; }
  AltBit bit() { return AltBit{coin()}; }

  Payload app_payload(std::span<const std::string> alphabet) {
    return Payload::app(
        alphabet[static_cast<std::size_t>(
            between(0, static_cast<int>(alphabet.size()) - 1))]);
  }
  /// Alphabet tokens plus the synchronization marker.
  Payload any_payload(std::span<const std::string> alphabet) {
    const int k = between(0, static_cast<int>(alphabet.size()));
    if (k == static_cast<int>(alphabet.size())) return Payload::synchro();
    return Payload::app(alphabet[static_cast<std::size_t>(k)]);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

SenderState draw_sender(Sdl, Draw& d, const ProtocolParams& params,
                        std::span<const std::string> alphabet,
                        SenderCursor& cursor) {
  SenderState s;
  s.phase = static_cast<SenderPhase>(d.between(0, 2));
  s.ab = d.bit();
  cursor = SenderCursor::AtSend;
  if (s.phase != SenderPhase::Idle) {
    s.ack_count = d.between(0, params.ack_threshold() - 1);
    s.current_payload = d.app_payload(alphabet);
    cursor = d.coin() ? SenderCursor::AtPoll : SenderCursor::AtSend;
  }
  return s;
}

AbpSenderState draw_sender(Abp, Draw& d, const ProtocolParams&,
                           std::span<const std::string> alphabet,
                           SenderCursor& cursor) {
  AbpSenderState s;
  s.phase = d.coin() ? AbpPhase::Sending : AbpPhase::Idle;
  s.ab = d.bit();
  cursor = SenderCursor::AtSend;
  if (s.phase == AbpPhase::Sending) {
    s.current_payload = d.app_payload(alphabet);
    cursor = d.coin() ? SenderCursor::AtPoll : SenderCursor::AtSend;
  }
  return s;
}

ReceiverState draw_receiver(Sdl, Draw& d, const ProtocolParams& params,
                            std::span<const std::string> alphabet) {
  ReceiverState r;
  r.last_delivered = d.bit();
  std::vector<std::pair<Payload, AltBit>> keys;
  for (const auto& t : alphabet) {
    keys.emplace_back(Payload::app(t), kBitFalse);
    keys.emplace_back(Payload::app(t), kBitTrue);
  }
  keys.emplace_back(Payload::synchro(), kBitFalse);
  keys.emplace_back(Payload::synchro(), kBitTrue);
  std::shuffle(keys.begin(), keys.end(), d.engine());
  const int len = std::min(d.between(0, params.delivery_threshold()),
                           static_cast<int>(keys.size()));
  for (int i = 0; i < len; ++i) {
    auto& [payload, ab] = keys[static_cast<std::size_t>(i)];
    r.queue.push_back(
        QueueEntry{payload, ab, d.between(0, params.delivery_threshold())});
  }
  return r;
}

AbpReceiverState draw_receiver(Abp, Draw& d, const ProtocolParams&,
                               std::span<const std::string>) {
  return AbpReceiverState{d.bit()};
}

template <class Packet>
Channel<Packet> draw_channel(Draw& d, const ProtocolParams& params,
                             std::span<const std::string> alphabet) {
  std::vector<Packet> ghosts;
  const int n = d.between(0, params.capacity());
  for (int i = 0; i < n; ++i) {
    Payload p = d.any_payload(alphabet);
    ghosts.push_back(Packet{std::move(p), d.bit()});
  }
  return init_with_ghosts<Packet>(params.capacity(), ghosts);
}

}  // namespace

template <Machine P>
BasicConfiguration<P> arbitrary_configuration(
    std::uint64_t seed, ProtocolParams params,
    std::span<const std::string> alphabet) {
  if (alphabet.empty()) {
    throw std::invalid_argument("arbitrary_configuration: empty alphabet");
  }
  Draw d(seed);
  BasicConfiguration<P> cfg = clean_configuration<P>(params);
  cfg.sender = draw_sender(P{}, d, params, alphabet, cfg.cursor);
  cfg.receiver = draw_receiver(P{}, d, params, alphabet);
  cfg.chan_data = draw_channel<DataPacket>(d, params, alphabet);
  cfg.chan_ack = draw_channel<AckPacket>(d, params, alphabet);
  return cfg;
}

// --- replay ----------------------------------------------------------------

namespace {

bool is_packet_event(const Event& e, Event::Kind kind, WireKind dir) {
  return e.kind == kind && e.dir == dir;
}

template <class Packet>
Packet packet_of(const Event& e) {
  if (!e.payload || !e.ab) {
    throw ContractViolation("replay: packet event without payload/ab");
  }
  return Packet{*e.payload, *e.ab};
}

/// Overflow choice that reproduces a logged eviction.
template <class Packet>
std::optional<ChannelChoice> eviction_choice(const Channel<Packet>& ch,
                                             const Packet& incoming,
                                             const Event* evicted) {
  if (!evicted) return std::nullopt;
  const auto victim = packet_of<Packet>(*evicted);
  if (victim == incoming) return ChannelChoice::evict_incoming();
  const auto k = ch.find(victim);
  if (!k) throw ContractViolation("replay: evicted packet not in channel");
  return ChannelChoice::evict(*k);
}

}  // namespace

template <Machine P>
BasicConfiguration<P> replay_events(const BasicTrace<P>& trace) {
  BasicConfiguration<P> cfg = trace.config_init;
  AppCursor app{trace.app_messages, 0, std::nullopt};
  const auto& ev = trace.events;
  std::size_t i = 0;

  auto at = [&](std::size_t k) -> const Event* {
    return k < ev.size() ? &ev[k] : nullptr;
  };

  while (i < ev.size()) {
    const Event& e = ev[i];
    Step step;
    using EK = Event::Kind;
    if (e.kind == EK::AppSend) {
      step = Step::begin();
    } else if (is_packet_event(e, EK::PacketSent, WireKind::Data)) {
      const Event* next = at(i + 1);
      const Event* evicted =
          next && is_packet_event(*next, EK::PacketEvicted, WireKind::Data)
              ? next
              : nullptr;
      step = Step::sender_send(eviction_choice(
          cfg.chan_data, packet_of<DataPacket>(e), evicted));
    } else if (e.kind == EK::NullPoll) {
      step = Step::sender_poll(ChannelChoice::deliver_null());
    } else if (is_packet_event(e, EK::PacketDelivered, WireKind::Ack)) {
      const auto k = cfg.chan_ack.find(packet_of<AckPacket>(e));
      if (!k) throw ContractViolation("replay: polled ack not in channel");
      step = P::idle(cfg.sender)
                 ? Step::drain(*k)
                 : Step::sender_poll(ChannelChoice::deliver(*k));
    } else if (is_packet_event(e, EK::PacketDelivered, WireKind::Data)) {
      const auto pkt = packet_of<DataPacket>(e);
      const auto k = cfg.chan_data.find(pkt);
      if (!k) throw ContractViolation("replay: received packet not in channel");
      std::size_t j = i + 1;
      while (j < ev.size() &&
             !is_packet_event(ev[j], EK::PacketSent, WireKind::Ack)) {
        ++j;
      }
      const Event* next = at(j + 1);
      const Event* evicted =
          next && is_packet_event(*next, EK::PacketEvicted, WireKind::Ack)
              ? next
              : nullptr;
      step = Step::receive(*k, eviction_choice(cfg.chan_ack,
                                               AckPacket{pkt.payload, pkt.ab},
                                               evicted));
    } else if (e.kind == EK::PacketLost && e.dir) {
      std::optional<std::size_t> k;
      if (*e.dir == WireKind::Data) {
        k = cfg.chan_data.find(packet_of<DataPacket>(e));
      } else {
        k = cfg.chan_ack.find(packet_of<AckPacket>(e));
      }
      if (!k) throw ContractViolation("replay: lost packet not in channel");
      step = Step::lose(*e.dir, *k);
    } else {
      throw ContractViolation("replay: event " +
                              std::string(to_string(e.kind)) +
                              " does not start a step");
    }

    apply_step(cfg, step, app, [&](Event&& produced) {
      const Event* logged = at(i);
      if (!logged) throw ContractViolation("replay: log ended mid-step");
      produced.step = logged->step;
      if (!(produced == *logged)) {
        throw ContractViolation("replay: event " + std::to_string(i) +
                                " disagrees with the transition functions");
      }
      ++i;
    });
  }
  return cfg;
}

// --- scenarios -------------------------------------------------------------

namespace {

void preload(ReceiverState& r, const Payload& p, AltBit ab, int count) {
  r.queue.push_back(QueueEntry{p, ab, count});
}
void preload(AbpReceiverState&, const Payload&, AltBit, int) {}

}  // namespace

template <Machine P>
ScenarioSetup<P> scenario(ScenarioId id) {
  if (id == ScenarioId::AbpFail) {
    // Two ghosts with alternating bits: the plain alternating-bit receiver
    // delivers both before anything is sent.
    const ProtocolParams params(2);
    ScenarioSetup<P> s{clean_configuration<P>(params), Scripted{}, {"A"}};
    s.config.receiver.last_delivered = kBitFalse;
    const DataPacket g0{Payload::app("g0"), kBitTrue};
    const DataPacket g1{Payload::app("g1"), kBitFalse};
    preload(s.config.receiver, g0.payload, g0.ab, params.capacity());
    preload(s.config.receiver, g1.payload, g1.ab, params.capacity());
    const std::array ghosts{g0, g1};
    s.config.chan_data = init_with_ghosts<DataPacket>(params.capacity(), ghosts);
    s.policy = Scripted{{Step::receive(0), Step::receive(0)}, true};
    return s;
  }

  // One ghost (g, 1) in flight, the receiver already holding c copies of it
  // and expecting the other bit: the first receive delivers it.
  const ProtocolParams params(1);
  ScenarioSetup<P> s{clean_configuration<P>(params), Scripted{}, {}};
  const DataPacket ghost{Payload::app("g"), kBitTrue};
  s.config.receiver.last_delivered = kBitFalse;
  preload(s.config.receiver, ghost.payload, ghost.ab, params.capacity());
  const std::array ghosts{ghost};
  s.config.chan_data = init_with_ghosts<DataPacket>(params.capacity(), ghosts);
  s.policy = Scripted{{Step::receive(0)}, true};
  switch (id) {
    case ScenarioId::GhostTight:
      s.app_messages = {"A"};
      break;
    case ScenarioId::DupTight:
      s.app_messages = {"g", "B"};
      break;
    case ScenarioId::ReorderTight:
      s.app_messages = {"A", "g"};
      break;
    case ScenarioId::AbpFail:
      break;
  }
  return s;
}

std::uint64_t scenario_max_steps(ScenarioId) { return 10'000; }

// --- explicit instantiations -----------------------------------------------

#define SDLINK_INSTANTIATE(P)                                                 \
  template std::vector<Step> enabled_steps<P>(const BasicConfiguration<P>&,   \
                                              const AppCursor&);              \
  template std::optional<Step> lockstep_step<P>(const BasicConfiguration<P>&, \
                                                const AppCursor&);            \
  template BasicTrace<P> run<P>(const BasicConfiguration<P>&,                 \
                                const SchedulerPolicy&,                       \
                                std::span<const std::string>, std::uint64_t); \
  template BasicConfiguration<P> arbitrary_configuration<P>(                  \
      std::uint64_t, ProtocolParams, std::span<const std::string>);           \
  template BasicConfiguration<P> replay_events<P>(const BasicTrace<P>&);      \
  template ScenarioSetup<P> scenario<P>(ScenarioId);

SDLINK_INSTANTIATE(Sdl)
SDLINK_INSTANTIATE(Abp)

#undef SDLINK_INSTANTIATE

}  // namespace sdlink
