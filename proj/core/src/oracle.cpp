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

#include "sdlink/oracle.hpp"

#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <thread>

namespace sdlink {

std::string_view to_string(InitMode mode) {
  return mode == InitMode::CleanOnly ? "clean" : "all";
}

std::optional<InitMode> parse_init_mode(std::string_view name) {
  if (name == "clean") return InitMode::CleanOnly;
  if (name == "all") return InitMode::AllValidConfigurations;
  return std::nullopt;
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::Loss:
      return "loss";
    case Property::Duplication:
      return "duplication";
    case Property::Creation:
      return "creation";
    case Property::Reordering:
      return "reordering";
  }
  return "?";
}

std::vector<std::string> effective_alphabet(const ExploreParams& params) {
  if (!params.token_alphabet.empty()) return params.token_alphabet;
  std::vector<std::string> out = params.app_messages;
  std::string fresh = "g";
  while (std::ranges::find(out, fresh) != out.end()) fresh += "'";
  out.push_back(fresh);
  return out;
}

namespace {

// --- enumeration of valid configurations ------------------------------------

std::vector<Payload> payload_universe(std::span<const std::string> alphabet) {
  std::vector<Payload> out{Payload::synchro()};
  for (const auto& t : alphabet) out.push_back(Payload::app(t));
  return out;
}

std::vector<std::pair<SenderState, SenderCursor>> all_senders(
    Sdl, const ProtocolParams& params, std::span<const std::string> alphabet) {
  std::vector<std::pair<SenderState, SenderCursor>> out;
  for (AltBit ab : {kBitFalse, kBitTrue}) {
    out.push_back({SenderState{ab, SenderPhase::Idle, std::nullopt, 0},
                   SenderCursor::AtSend});
  }
  for (auto phase : {SenderPhase::SynchroPhase, SenderPhase::PayloadPhase}) {
    for (AltBit ab : {kBitFalse, kBitTrue}) {
      for (const auto& t : alphabet) {
        for (int acks = 0; acks < params.ack_threshold(); ++acks) {
          for (auto cur : {SenderCursor::AtSend, SenderCursor::AtPoll}) {
            out.push_back({SenderState{ab, phase, Payload::app(t), acks}, cur});
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::pair<AbpSenderState, SenderCursor>> all_senders(
    Abp, const ProtocolParams&, std::span<const std::string> alphabet) {
  std::vector<std::pair<AbpSenderState, SenderCursor>> out;
  for (AltBit ab : {kBitFalse, kBitTrue}) {
    out.push_back({AbpSenderState{ab, AbpPhase::Idle, std::nullopt},
                   SenderCursor::AtSend});
  }
  for (AltBit ab : {kBitFalse, kBitTrue}) {
    for (const auto& t : alphabet) {
      for (auto cur : {SenderCursor::AtSend, SenderCursor::AtPoll}) {
        out.push_back({AbpSenderState{ab, AbpPhase::Sending, Payload::app(t)},
                       cur});
      }
    }
  }
  return out;
}

std::vector<ReceiverState> all_receivers(Sdl, const ProtocolParams& params,
                                         std::span<const std::string> alphabet) {
  std::vector<std::pair<Payload, AltBit>> keys;
  for (const auto& p : payload_universe(alphabet)) {
    keys.emplace_back(p, kBitFalse);
    keys.emplace_back(p, kBitTrue);
  }
  const int max_len = params.delivery_threshold();
  std::vector<std::vector<QueueEntry>> queues;
  std::vector<QueueEntry> cur;
  std::vector<bool> used(keys.size(), false);
  std::function<void()> rec = [&] {
    queues.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      for (int n = 0; n <= params.delivery_threshold(); ++n) {
        cur.push_back(QueueEntry{keys[k].first, keys[k].second, n});
        rec();
        cur.pop_back();
      }
      used[k] = false;
    }
  };
  rec();
  std::vector<ReceiverState> out;
  for (AltBit last : {kBitFalse, kBitTrue}) {
    for (const auto& q : queues) out.push_back(ReceiverState{last, q});
  }
  return out;
}

std::vector<AbpReceiverState> all_receivers(Abp, const ProtocolParams&,
                                            std::span<const std::string>) {
  return {AbpReceiverState{kBitFalse}, AbpReceiverState{kBitTrue}};
}

/// Multisets of size 0..c over the packet universe.
template <class Packet>
std::vector<Channel<Packet>> all_channels(const ProtocolParams& params,
                                          std::span<const std::string> alphabet) {
  std::vector<Packet> universe;
  for (const auto& p : payload_universe(alphabet)) {
    universe.push_back(Packet{p, kBitFalse});
    universe.push_back(Packet{p, kBitTrue});
  }
  std::vector<Channel<Packet>> out;
  Channel<Packet> cur(params.capacity());
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    out.push_back(cur);
    if (cur.full()) return;
    for (std::size_t k = from; k < universe.size(); ++k) {
      Channel<Packet> saved = cur;
      cur.insert(universe[k]);
      rec(k);
      cur = std::move(saved);
    }
  };
  rec(0);
  return out;
}

template <Machine P, class Fn>
void for_each_valid_configuration(const ProtocolParams& params,
                                  std::span<const std::string> alphabet,
                                  Fn&& fn) {
  const auto senders = all_senders(P{}, params, alphabet);
  const auto receivers = all_receivers(P{}, params, alphabet);
  const auto data = all_channels<DataPacket>(params, alphabet);
  const auto acks = all_channels<AckPacket>(params, alphabet);
  BasicConfiguration<P> cfg = clean_configuration<P>(params);
  for (const auto& [s, cur] : senders) {
    cfg.sender = s;
    cfg.cursor = cur;
    for (const auto& r : receivers) {
      cfg.receiver = r;
      for (const auto& d : data) {
        cfg.chan_data = d;
        for (const auto& a : acks) {
          cfg.chan_ack = a;
          if (is_valid(cfg)) fn(cfg);
        }
      }
    }
  }
}

// --- canonical state encoding -----------------------------------------------

class Dictionary {
 public:
  explicit Dictionary(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)) {}

  std::uint8_t code(const std::string& token) const {
    auto it = std::ranges::find(tokens_, token);
    if (it == tokens_.end()) {
      throw std::logic_error("oracle: token outside the dictionary");
    }
    return static_cast<std::uint8_t>(1 + (it - tokens_.begin()));
  }
  std::uint8_t code(const Payload& p) const {
    return p.is_synchro() ? 0 : code(p.token());
  }
  Payload payload(std::uint8_t c) const {
    if (c == 0) return Payload::synchro();
    return Payload::app(tokens_.at(c - 1u));
  }
  const std::string& token(std::uint8_t c) const { return tokens_.at(c - 1u); }

 private:
  std::vector<std::string> tokens_;
};

constexpr std::uint8_t kNone = 0xFF;

class Writer {
 public:
  explicit Writer(std::string& out) : out_(out) {}
  void byte(unsigned v) { out_.push_back(static_cast<char>(v)); }

 private:
  std::string& out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::uint8_t byte() { return static_cast<std::uint8_t>(in_.at(pos_++)); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void put_sender(Writer& w, const Dictionary& dict, const SenderState& s,
                SenderCursor cur) {
  w.byte(static_cast<unsigned>(s.phase) | (s.ab.value ? 4u : 0u) |
         (cur == SenderCursor::AtPoll ? 8u : 0u));
  w.byte(s.current_payload ? dict.code(*s.current_payload) : kNone);
  w.byte(static_cast<unsigned>(s.ack_count));
}

void get_sender(Reader& r, const Dictionary& dict, SenderState& s,
                SenderCursor& cur) {
  const auto b = r.byte();
  s.phase = static_cast<SenderPhase>(b & 3u);
  s.ab = AltBit{(b & 4u) != 0};
  cur = (b & 8u) ? SenderCursor::AtPoll : SenderCursor::AtSend;
  const auto p = r.byte();
  s.current_payload.reset();
  if (p != kNone) s.current_payload = dict.payload(p);
  s.ack_count = r.byte();
}

void put_sender(Writer& w, const Dictionary& dict, const AbpSenderState& s,
                SenderCursor cur) {
  w.byte(static_cast<unsigned>(s.phase) | (s.ab.value ? 4u : 0u) |
         (cur == SenderCursor::AtPoll ? 8u : 0u));
  w.byte(s.current_payload ? dict.code(*s.current_payload) : kNone);
}

void get_sender(Reader& r, const Dictionary& dict, AbpSenderState& s,
                SenderCursor& cur) {
  const auto b = r.byte();
  s.phase = static_cast<AbpPhase>(b & 3u);
  s.ab = AltBit{(b & 4u) != 0};
  cur = (b & 8u) ? SenderCursor::AtPoll : SenderCursor::AtSend;
  const auto p = r.byte();
  s.current_payload.reset();
  if (p != kNone) s.current_payload = dict.payload(p);
}

unsigned packed(const Dictionary& dict, const Payload& p, AltBit ab) {
  return static_cast<unsigned>(dict.code(p)) << 1 | (ab.value ? 1u : 0u);
}

void put_receiver(Writer& w, const Dictionary& dict, const ReceiverState& r) {
  w.byte(r.last_delivered.value ? 1u : 0u);
  w.byte(static_cast<unsigned>(r.queue.size()));
  for (const auto& e : r.queue) {
    w.byte(packed(dict, e.payload, e.ab));
    w.byte(static_cast<unsigned>(e.count));
  }
}

void get_receiver(Reader& rd, const Dictionary& dict, ReceiverState& r) {
  r.last_delivered = AltBit{rd.byte() != 0};
  const auto n = rd.byte();
  r.queue.clear();
  for (unsigned i = 0; i < n; ++i) {
    const auto k = rd.byte();
    const auto count = rd.byte();
    r.queue.push_back(QueueEntry{dict.payload(static_cast<std::uint8_t>(k >> 1)),
                                 AltBit{(k & 1u) != 0}, count});
  }
}

void put_receiver(Writer& w, const Dictionary&, const AbpReceiverState& r) {
  w.byte(r.last_delivered.value ? 1u : 0u);
}

void get_receiver(Reader& rd, const Dictionary&, AbpReceiverState& r) {
  r.last_delivered = AltBit{rd.byte() != 0};
}

template <class Packet>
void put_channel(Writer& w, const Dictionary& dict, const Channel<Packet>& ch) {
  w.byte(static_cast<unsigned>(ch.size()));
  for (const auto& p : ch.contents()) w.byte(packed(dict, p.payload, p.ab));
}

template <class Packet>
void get_channel(Reader& rd, const Dictionary& dict, Channel<Packet>& ch,
                 int capacity) {
  ch = Channel<Packet>(capacity);
  const auto n = rd.byte();
  for (unsigned i = 0; i < n; ++i) {
    const auto k = rd.byte();
    ch.insert(Packet{dict.payload(static_cast<std::uint8_t>(k >> 1)),
                     AltBit{(k & 1u) != 0}});
  }
}

/// One explored state: the configuration, how many app sends have begun, and
/// the tokens delivered so far.
template <Machine P>
struct State {
  BasicConfiguration<P> cfg;
  std::size_t next = 0;
  std::vector<std::uint8_t> delivered;
};

template <Machine P>
void encode(std::string& out, const Dictionary& dict, const State<P>& s) {
  out.clear();
  Writer w(out);
  put_sender(w, dict, s.cfg.sender, s.cfg.cursor);
  put_receiver(w, dict, s.cfg.receiver);
  put_channel(w, dict, s.cfg.chan_data);
  put_channel(w, dict, s.cfg.chan_ack);
  w.byte(static_cast<unsigned>(s.next));
  w.byte(static_cast<unsigned>(s.delivered.size()));
  for (auto c : s.delivered) w.byte(c);
}

template <Machine P>
State<P> decode(std::string_view key, const Dictionary& dict,
                const ProtocolParams& params) {
  State<P> s{clean_configuration<P>(params), 0, {}};
  Reader r(key);
  get_sender(r, dict, s.cfg.sender, s.cfg.cursor);
  get_receiver(r, dict, s.cfg.receiver);
  get_channel(r, dict, s.cfg.chan_data, params.capacity());
  get_channel(r, dict, s.cfg.chan_ack, params.capacity());
  s.next = r.byte();
  const auto n = r.byte();
  for (unsigned i = 0; i < n; ++i) s.delivered.push_back(r.byte());
  return s;
}

// --- step codes ---------------------------------------------------------------

std::uint32_t choice_bits(const std::optional<ChannelChoice>& c) {
  if (!c) return 0;
  return 1u | static_cast<std::uint32_t>(c->kind) << 1 |
         static_cast<std::uint32_t>(c->index & 0xFFu) << 4;
}

std::optional<ChannelChoice> choice_from(std::uint32_t bits) {
  if ((bits & 1u) == 0) return std::nullopt;
  return ChannelChoice{static_cast<ChannelChoice::Kind>((bits >> 1) & 7u),
                       (bits >> 4) & 0xFFu};
}

std::uint32_t encode_step(const Step& s) {
  return static_cast<std::uint32_t>(s.kind) |
         (s.dir == WireKind::Ack ? 8u : 0u) | choice_bits(s.take) << 4 |
         choice_bits(s.evict) << 16;
}

Step decode_step(std::uint32_t bits) {
  Step s;
  s.kind = static_cast<Step::Kind>(bits & 7u);
  s.dir = (bits & 8u) ? WireKind::Ack : WireKind::Data;
  s.take = choice_from((bits >> 4) & 0xFFFu);
  s.evict = choice_from((bits >> 16) & 0xFFFu);
  return s;
}

// --- visited set --------------------------------------------------------------

/// Append-only store of canonical keys, addressed by dense ids.
class KeyArena {
 public:
  std::uint32_t add(std::string_view key) {
    bytes_.append(key);
    offsets_.push_back(bytes_.size());
    return static_cast<std::uint32_t>(offsets_.size() - 2);
  }
  std::string_view get(std::uint32_t id) const {
    return std::string_view(bytes_).substr(offsets_[id],
                                           offsets_[id + 1] - offsets_[id]);
  }
  std::size_t size() const { return offsets_.size() - 1; }

 private:
  std::string bytes_;
  std::vector<std::uint64_t> offsets_{0};
};

struct IdHash {
  using is_transparent = void;
  const KeyArena* arena;
  std::size_t operator()(std::uint32_t id) const {
    return absl::Hash<std::string_view>{}(arena->get(id));
  }
  std::size_t operator()(std::string_view key) const {
    return absl::Hash<std::string_view>{}(key);
  }
};

struct IdEq {
  using is_transparent = void;
  const KeyArena* arena;
  std::string_view view(std::uint32_t id) const { return arena->get(id); }
  std::string_view view(std::string_view key) const { return key; }
  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return view(a) == view(b);
  }
};

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct Successor {
  std::uint32_t parent;
  std::uint32_t step;
  std::string key;
  bool violating;
};

template <Machine P>
class Explorer {
 public:
  explicit Explorer(const ExploreParams& params)
      : params_(params),
        proto_(params.capacity),
        alphabet_(effective_alphabet(params)),
        dict_(dictionary_tokens()),
        visited_(0, IdHash{&arena_}, IdEq{&arena_}) {
    for (const auto& t : params_.app_messages) app_codes_.push_back(dict_.code(t));
  }

  ExploreReport<P> run() {
    add_roots();
    report_.initial_states = arena_.size();

    std::size_t level_begin = 0;
    int depth = 0;
    bool partial = false;
    while (level_begin < arena_.size()) {
      const std::size_t level_end = arena_.size();
      report_.max_depth = depth;
      const bool probe = depth >= params_.depth_bound;
      for (std::size_t lo = level_begin; lo < level_end; lo += kChunk) {
        const std::size_t hi = std::min(level_end, lo + kChunk);
        auto succ = expand(lo, hi);
        if (probe) {
          for (const auto& s : succ) {
            if (!visited_.contains(std::string_view(s.key))) {
              partial = true;
              break;
            }
          }
          if (partial) break;
        } else {
          merge(succ);
        }
      }
      if (probe) break;
      level_begin = level_end;
      ++depth;
    }
    report_.visited_states = arena_.size();
    report_.exhausted = !partial;
    return std::move(report_);
  }

 private:
  static constexpr std::size_t kChunk = 1 << 15;

  std::vector<std::string> dictionary_tokens() const {
    std::vector<std::string> out = alphabet_;
    for (const auto& t : params_.app_messages) {
      if (std::ranges::find(out, t) == out.end()) out.push_back(t);
    }
    if (out.size() > 120) throw std::invalid_argument("explore: alphabet too big");
    return out;
  }

  bool violates(const std::vector<std::uint8_t>& r) const {
    auto prefix_of_app = [&](std::size_t skip) {
      if (r.size() - skip > app_codes_.size()) return false;
      return std::equal(r.begin() + static_cast<long>(skip), r.end(),
                        app_codes_.begin());
    };
    if (prefix_of_app(0)) return false;
    return !(r.size() >= 1 && prefix_of_app(1));
  }

  /// At quiescence every message has been acknowledged, so R must be S or
  /// x.S in full.
  bool complete(const std::vector<std::uint8_t>& r) const {
    const auto n = app_codes_.size();
    if (r.size() == n) return std::ranges::equal(r, app_codes_);
    return r.size() == n + 1 &&
           std::equal(r.begin() + 1, r.end(), app_codes_.begin());
  }

  std::uint32_t insert(std::string_view key, std::uint32_t parent,
                       std::uint32_t step, bool root_idle) {
    const auto id = arena_.add(key);
    visited_.insert(id);
    parent_.push_back(parent);
    step_.push_back(step);
    root_idle_.push_back(root_idle ? 1 : 0);
    return id;
  }

  void add_roots() {
    std::string key;
    auto add = [&](const BasicConfiguration<P>& cfg) {
      State<P> s{cfg, 0, {}};
      encode(key, dict_, s);
      if (visited_.contains(std::string_view(key))) return;
      insert(key, kNoParent, 0, P::idle(cfg.sender));
    };
    if (params_.init_mode == InitMode::CleanOnly) {
      add(clean_configuration<P>(proto_));
    } else {
      for_each_valid_configuration<P>(proto_, alphabet_, add);
    }
  }

  void expand_range(std::size_t lo, std::size_t hi,
                    std::vector<Successor>& out) const {
    std::string key;
    for (std::size_t id = lo; id < hi; ++id) {
      if (std::ranges::binary_search(violating_, id)) {
        continue;
      }
      const auto s = decode<P>(arena_.get(static_cast<std::uint32_t>(id)),
                               dict_, proto_);
      AppCursor app{params_.app_messages, s.next, std::nullopt};
      for (const Step& step : enabled_steps(s.cfg, app)) {
        State<P> t = s;
        AppCursor a = app;
        apply_step(t.cfg, step, a, [&](Event&& e) {
          if (e.kind == Event::Kind::MsgDelivered) {
            t.delivered.push_back(dict_.code(*e.token));
          }
        });
        t.next = a.next;
        bool bad = t.delivered.size() != s.delivered.size() &&
                   violates(t.delivered);
        if (!bad && is_quiescent(t.cfg, a)) bad = !complete(t.delivered);
        encode(key, dict_, t);
        out.push_back(Successor{static_cast<std::uint32_t>(id),
                                encode_step(step), key, bad});
      }
    }
  }

  std::vector<Successor> expand(std::size_t lo, std::size_t hi) const {
    const int jobs = std::max(1, params_.jobs);
    if (jobs == 1 || hi - lo < 2) {
      std::vector<Successor> out;
      expand_range(lo, hi, out);
      return out;
    }
    std::vector<std::vector<Successor>> parts(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    const std::size_t per = (hi - lo + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const std::size_t a = std::min(hi, lo + per * j);
      const std::size_t b = std::min(hi, a + per);
      workers.emplace_back([this, a, b, &parts, j] {
        expand_range(a, b, parts[static_cast<std::size_t>(j)]);
      });
    }
    for (auto& w : workers) w.join();
    std::vector<Successor> out;
    for (auto& p : parts) {
      std::move(p.begin(), p.end(), std::back_inserter(out));
    }
    return out;
  }

  void merge(const std::vector<Successor>& succ) {
    for (const auto& s : succ) {
      if (visited_.contains(std::string_view(s.key))) continue;
      const bool idle = root_idle_[s.parent] != 0;
      const auto id = insert(s.key, s.parent, s.step, idle);
      if (!s.violating) continue;
      violating_.push_back(id);
      ++report_.violating_states;
      if (idle) ++report_.violating_from_idle;
      if (report_.witnesses.size() < params_.max_witnesses) {
        report_.witnesses.push_back(witness(id));
      }
    }
    report_.transitions += succ.size();
  }

  Violation<P> witness(std::uint32_t id) const {
    Violation<P> v;
    std::uint32_t cur = id;
    while (parent_[cur] != kNoParent) {
      v.steps.push_back(decode_step(step_[cur]));
      cur = parent_[cur];
    }
    std::reverse(v.steps.begin(), v.steps.end());
    v.root = decode<P>(arena_.get(cur), dict_, proto_).cfg;
    v.started_idle = root_idle_[id] != 0;
    for (auto c : decode<P>(arena_.get(id), dict_, proto_).delivered) {
      v.delivered.push_back(dict_.token(c));
    }
    return v;
  }

  ExploreParams params_;
  ProtocolParams proto_;
  std::vector<std::string> alphabet_;
  Dictionary dict_;
  std::vector<std::uint8_t> app_codes_;
  KeyArena arena_;
  absl::flat_hash_set<std::uint32_t, IdHash, IdEq> visited_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> step_;
  std::vector<std::uint8_t> root_idle_;
  /// Ids of violating states, ascending; never expanded.
  std::vector<std::uint32_t> violating_;
  ExploreReport<P> report_;
};

void check_params(const ExploreParams& params) {
  if (params.capacity < 1 || params.capacity > 8) {
    throw std::invalid_argument("explore: capacity must be in [1, 8]");
  }
  if (params.depth_bound < 0) {
    throw std::invalid_argument("explore: depth bound must be >= 0");
  }
  if (params.app_messages.size() > 8) {
    throw std::invalid_argument("explore: at most 8 app messages");
  }
  std::vector<std::string> sorted = params.app_messages;
  std::ranges::sort(sorted);
  if (std::ranges::adjacent_find(sorted) != sorted.end()) {
    throw std::invalid_argument("explore: app messages must be distinct");
  }
}

}  // namespace

template <Machine P>
ExploreReport<P> explore(const ExploreParams& params) {
  check_params(params);
  return Explorer<P>(params).run();
}

template <Machine P>
std::vector<BasicConfiguration<P>> all_valid_configurations(
    ProtocolParams params, std::span<const std::string> alphabet) {
  std::vector<BasicConfiguration<P>> out;
  for_each_valid_configuration<P>(
      params, alphabet, [&](const BasicConfiguration<P>& c) { out.push_back(c); });
  return out;
}

template ExploreReport<Sdl> explore<Sdl>(const ExploreParams&);
template ExploreReport<Abp> explore<Abp>(const ExploreParams&);
template std::vector<BasicConfiguration<Sdl>> all_valid_configurations<Sdl>(
    ProtocolParams, std::span<const std::string>);
template std::vector<BasicConfiguration<Abp>> all_valid_configurations<Abp>(
    ProtocolParams, std::span<const std::string>);

// --- brute-force formula evaluation -------------------------------------------

namespace {

using Seq = std::span<const std::string>;

bool contains(Seq w, const std::string& m) {
  return std::ranges::find(w, m) != w.end();
}

/// W^j.
Seq head(Seq w, std::size_t j) { return w.first(std::min(j, w.size())); }
/// W_i.
Seq tail(Seq w, std::size_t i) { return w.subspan(std::min(i, w.size())); }

bool loss_holds(Seq s, Seq r, int a) {
  for (const auto& m : tail(s, static_cast<std::size_t>(a))) {
    if (!contains(r, m)) return false;
  }
  return true;
}

bool dup_holds(Seq s, Seq r, int b) {
  for (const auto& m : s) {
    const auto n = std::ranges::count(r, m);
    if (n > 1 && !contains(head(r, static_cast<std::size_t>(b)), m)) {
      return false;
    }
  }
  return true;
}

bool creation_holds(Seq s, Seq r, int c) {
  for (const auto& m : r) {
    if (!contains(s, m) && !contains(head(r, static_cast<std::size_t>(c)), m)) {
      return false;
    }
  }
  return true;
}

/// Tries every exponent vector (k0, ..., k_{n-1}) with sum |w|.
bool in_star(Seq s, Seq w) {
  std::vector<std::size_t> k(s.size(), 0);
  std::function<bool(std::size_t, std::size_t)> rec =
      [&](std::size_t j, std::size_t left) -> bool {
    if (j == s.size()) {
      if (left != 0) return false;
      std::vector<std::string> expansion;
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t t = 0; t < k[i]; ++t) expansion.push_back(s[i]);
      }
      return std::ranges::equal(expansion, w);
    }
    for (std::size_t n = 0; n <= left; ++n) {
      k[j] = n;
      if (rec(j + 1, left - n)) return true;
    }
    return false;
  };
  return rec(0, w.size());
}

bool reorder_holds(Seq s, Seq r, int d) {
  return in_star(s, tail(r, static_cast<std::size_t>(d)));
}

}  // namespace

bool evaluate_formula(Property property, std::span<const std::string> sent,
                      std::span<const std::string> delivered, int bound) {
  if (sent.size() > 6 || delivered.size() > 6) {
    throw std::invalid_argument("evaluate_formula: sequences longer than 6");
  }
  for (int x = 0; x <= bound; ++x) {
    bool holds = false;
    switch (property) {
      case Property::Loss:
        holds = loss_holds(sent, delivered, x);
        break;
      case Property::Duplication:
        holds = dup_holds(sent, delivered, x);
        break;
      case Property::Creation:
        holds = creation_holds(sent, delivered, x);
        break;
      case Property::Reordering:
        holds = reorder_holds(sent, delivered, x);
        break;
    }
    if (holds) return true;
  }
  return false;
}

}  // namespace sdlink
