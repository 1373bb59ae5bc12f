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

#include "sdlink/trace_io.hpp"

#include <sstream>

#include "json.hpp"

namespace sdlink {

namespace {

using Json = nlohmann::ordered_json;

// --- writing -----------------------------------------------------------------

Json payload_json(const Payload& p) {
  if (p.is_synchro()) return Json{{"kind", "synchro"}};
  return Json{{"kind", "app"}, {"token", p.token()}};
}

template <class Packet>
Json packet_json(const Packet& p) {
  return Json{{"wire", std::string(to_string(WireKindOf<Packet>::value))},
              {"payload", payload_json(p.payload)},
              {"ab", p.ab.value}};
}

template <class Packet>
Json channel_json(const Channel<Packet>& ch) {
  Json out = Json::array();
  for (const auto& p : ch.contents()) out.push_back(packet_json(p));
  return out;
}

std::string_view cursor_name(SenderCursor c) {
  return c == SenderCursor::AtSend ? "send" : "poll";
}

Json sender_json(const SenderState& s, SenderCursor cur) {
  Json j;
  j["phase"] = std::string(to_string(s.phase));
  j["ab"] = s.ab.value;
  j["cursor"] = std::string(cursor_name(cur));
  j["payload"] = s.current_payload ? payload_json(*s.current_payload) : Json();
  j["ack_count"] = s.ack_count;
  return j;
}

Json sender_json(const AbpSenderState& s, SenderCursor cur) {
  Json j;
  j["phase"] = std::string(to_string(s.phase));
  j["ab"] = s.ab.value;
  j["cursor"] = std::string(cursor_name(cur));
  j["payload"] = s.current_payload ? payload_json(*s.current_payload) : Json();
  return j;
}

Json receiver_json(const ReceiverState& r) {
  Json q = Json::array();
  for (const auto& e : r.queue) {
    q.push_back(Json{{"payload", payload_json(e.payload)},
                     {"ab", e.ab.value},
                     {"count", e.count}});
  }
  return Json{{"last_delivered", r.last_delivered.value}, {"queue", q}};
}

Json receiver_json(const AbpReceiverState& r) {
  return Json{{"last_delivered", r.last_delivered.value}};
}

template <Machine P>
Json config_json(const BasicConfiguration<P>& cfg) {
  Json j;
  j["sender"] = sender_json(cfg.sender, cfg.cursor);
  j["receiver"] = receiver_json(cfg.receiver);
  j["chan_data"] = channel_json(cfg.chan_data);
  j["chan_ack"] = channel_json(cfg.chan_ack);
  return j;
}

std::string_view choice_name(ChannelChoice::Kind k) {
  switch (k) {
    case ChannelChoice::Kind::DeliverIndex:
      return "deliver";
    case ChannelChoice::Kind::DeliverNull:
      return "deliver_null";
    case ChannelChoice::Kind::EvictIndex:
      return "evict";
    case ChannelChoice::Kind::EvictIncoming:
      return "evict_incoming";
    case ChannelChoice::Kind::LoseIndex:
      return "lose";
  }
  return "?";
}

Json choice_json(const ChannelChoice& c) {
  Json j{{"kind", std::string(choice_name(c.kind))}};
  if (c.kind == ChannelChoice::Kind::DeliverIndex ||
      c.kind == ChannelChoice::Kind::EvictIndex ||
      c.kind == ChannelChoice::Kind::LoseIndex) {
    j["index"] = c.index;
  }
  return j;
}

Json step_json(const Step& s) {
  Json j{{"kind", std::string(to_string(s.kind))}};
  if (s.kind == Step::Kind::Lose) j["dir"] = std::string(to_string(s.dir));
  if (s.take) j["take"] = choice_json(*s.take);
  if (s.evict) j["evict"] = choice_json(*s.evict);
  return j;
}

Json steps_json(std::span<const Step> steps) {
  Json out = Json::array();
  for (const auto& s : steps) out.push_back(step_json(s));
  return out;
}

Json policy_json(const SchedulerPolicy& policy) {
  if (const auto* rf = std::get_if<RandomFair>(&policy)) {
    return Json{{"kind", "random"},
                {"seed", rf->seed},
                {"p_deliver", rf->p_deliver},
                {"p_lose", rf->p_lose},
                {"patience", rf->patience}};
  }
  if (const auto* sc = std::get_if<Scripted>(&policy)) {
    return Json{{"kind", "scripted"},
                {"then_lockstep", sc->then_lockstep},
                {"steps", steps_json(sc->steps)}};
  }
  return Json{{"kind", "lockstep"}};
}

Json event_json(const Event& e) {
  Json j;
  j["step"] = e.step;
  j["kind"] = std::string(to_string(e.kind));
  if (e.dir) j["dir"] = std::string(to_string(*e.dir));
  if (e.payload) j["payload"] = payload_json(*e.payload);
  if (e.ab) j["ab"] = e.ab->value;
  if (e.seq) j["seq"] = *e.seq;
  if (e.token) j["token"] = *e.token;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// --- reading -----------------------------------------------------------------

/// A JSON node together with its pointer, for error locations.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw TraceParseError(path_.empty() ? "/" : path_, what);
  }

  bool has(std::string_view key) const {
    return j_.is_object() && j_.contains(key) && !j_.at(key).is_null();
  }
  Node at(std::string_view key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) {
      Node(j_, path_ + "/" + std::string(key)).fail("missing field");
    }
    return Node(j_.at(key), path_ + "/" + std::string(key));
  }
  Node at(std::size_t i) const {
    return Node(j_.at(i), path_ + "/" + std::to_string(i));
  }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned() &&
        !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

 private:
  const Json& j_;
  std::string path_;
};

Payload read_payload(const Node& n) {
  const std::string kind = n.at("kind").string();
  if (kind == "synchro") return Payload::synchro();
  if (kind == "app") return Payload::app(n.at("token").string());
  n.at("kind").fail("unknown payload kind '" + kind + "'");
}

AltBit read_bit(const Node& n) { return AltBit{n.boolean()}; }

template <class Packet>
Packet read_packet(const Node& n) {
  const std::string wire = n.at("wire").string();
  if (wire != to_string(WireKindOf<Packet>::value)) {
    n.at("wire").fail("packet of wire kind '" + wire + "' on the " +
                      std::string(to_string(WireKindOf<Packet>::value)) +
                      " channel");
  }
  return Packet{read_payload(n.at("payload")), read_bit(n.at("ab"))};
}

template <class Packet>
Channel<Packet> read_channel(const Node& n, int capacity) {
  if (std::cmp_greater(n.size(), capacity)) {
    n.fail("channel holds more than c = " + std::to_string(capacity) +
           " packets");
  }
  std::vector<Packet> ghosts;
  for (std::size_t i = 0; i < n.size(); ++i) {
    ghosts.push_back(read_packet<Packet>(n.at(i)));
  }
  return init_with_ghosts<Packet>(capacity, ghosts);
}

SenderCursor read_cursor(const Node& n) {
  const std::string c = n.string();
  if (c == "send") return SenderCursor::AtSend;
  if (c == "poll") return SenderCursor::AtPoll;
  n.fail("unknown cursor '" + c + "'");
}

std::optional<Payload> read_opt_payload(const Node& parent) {
  if (!parent.has("payload")) return std::nullopt;
  return read_payload(parent.at("payload"));
}

void read_sender(const Node& n, SenderState& s, SenderCursor& cur) {
  const std::string phase = n.at("phase").string();
  if (phase == "idle") {
    s.phase = SenderPhase::Idle;
  } else if (phase == "synchro") {
    s.phase = SenderPhase::SynchroPhase;
  } else if (phase == "payload") {
    s.phase = SenderPhase::PayloadPhase;
  } else {
    n.at("phase").fail("unknown sender phase '" + phase + "'");
  }
  s.ab = read_bit(n.at("ab"));
  cur = read_cursor(n.at("cursor"));
  s.current_payload = read_opt_payload(n);
  s.ack_count = static_cast<int>(n.at("ack_count").integer());
}

void read_sender(const Node& n, AbpSenderState& s, SenderCursor& cur) {
  const std::string phase = n.at("phase").string();
  if (phase == "idle") {
    s.phase = AbpPhase::Idle;
  } else if (phase == "sending") {
    s.phase = AbpPhase::Sending;
  } else {
    n.at("phase").fail("unknown sender phase '" + phase + "'");
  }
  s.ab = read_bit(n.at("ab"));
  cur = read_cursor(n.at("cursor"));
  s.current_payload = read_opt_payload(n);
}

void read_receiver(const Node& n, ReceiverState& r) {
  r.last_delivered = read_bit(n.at("last_delivered"));
  r.queue.clear();
  const Node q = n.at("queue");
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Node e = q.at(i);
    r.queue.push_back(QueueEntry{read_payload(e.at("payload")),
                                 read_bit(e.at("ab")),
                                 static_cast<int>(e.at("count").integer())});
  }
}

void read_receiver(const Node& n, AbpReceiverState& r) {
  r.last_delivered = read_bit(n.at("last_delivered"));
}

template <Machine P>
BasicConfiguration<P> read_config(const Node& n, const ProtocolParams& params) {
  BasicConfiguration<P> cfg = clean_configuration<P>(params);
  read_sender(n.at("sender"), cfg.sender, cfg.cursor);
  read_receiver(n.at("receiver"), cfg.receiver);
  cfg.chan_data = read_channel<DataPacket>(n.at("chan_data"), params.capacity());
  cfg.chan_ack = read_channel<AckPacket>(n.at("chan_ack"), params.capacity());
  if (!is_valid(cfg)) n.fail("configuration violates its invariants");
  return cfg;
}

WireKind read_wire(const Node& n) {
  const std::string w = n.string();
  if (w == "data") return WireKind::Data;
  if (w == "ack") return WireKind::Ack;
  n.fail("unknown wire kind '" + w + "'");
}

ChannelChoice read_choice(const Node& n) {
  const std::string kind = n.at("kind").string();
  auto index = [&] {
    return static_cast<std::size_t>(n.at("index").unsigned_integer());
  };
  if (kind == "deliver") return ChannelChoice::deliver(index());
  if (kind == "deliver_null") return ChannelChoice::deliver_null();
  if (kind == "evict") return ChannelChoice::evict(index());
  if (kind == "evict_incoming") return ChannelChoice::evict_incoming();
  if (kind == "lose") return ChannelChoice::lose(index());
  n.at("kind").fail("unknown choice kind '" + kind + "'");
}

Step read_step(const Node& n) {
  Step s;
  const std::string kind = n.at("kind").string();
  bool known = false;
  for (auto k : {Step::Kind::Begin, Step::Kind::SenderSend,
                 Step::Kind::SenderPoll, Step::Kind::Receive, Step::Kind::Lose,
                 Step::Kind::Drain}) {
    if (to_string(k) == kind) {
      s.kind = k;
      known = true;
    }
  }
  if (!known) n.at("kind").fail("unknown step kind '" + kind + "'");
  s.dir = s.kind == Step::Kind::SenderPoll || s.kind == Step::Kind::Drain
              ? WireKind::Ack
              : WireKind::Data;
  if (n.has("dir")) s.dir = read_wire(n.at("dir"));
  if (n.has("take")) s.take = read_choice(n.at("take"));
  if (n.has("evict")) s.evict = read_choice(n.at("evict"));
  return s;
}

std::vector<Step> read_step_list(const Node& n) {
  std::vector<Step> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(read_step(n.at(i)));
  return out;
}

SchedulerPolicy read_policy(const Node& n) {
  const std::string kind = n.at("kind").string();
  if (kind == "lockstep") return LockStep{};
  if (kind == "random") {
    RandomFair rf;
    rf.seed = n.at("seed").unsigned_integer();
    rf.p_deliver = n.at("p_deliver").number();
    rf.p_lose = n.at("p_lose").number();
    rf.patience = static_cast<int>(n.at("patience").integer());
    try {
      validate(rf);
    } catch (const std::invalid_argument& e) {
      n.fail(e.what());
    }
    return rf;
  }
  if (kind == "scripted") {
    return Scripted{read_step_list(n.at("steps")),
                    n.at("then_lockstep").boolean()};
  }
  n.at("kind").fail("unknown policy kind '" + kind + "'");
}

Event read_event(const Node& n) {
  Event e;
  e.step = n.at("step").unsigned_integer();
  const std::string kind = n.at("kind").string();
  const auto k = parse_event_kind(kind);
  if (!k) n.at("kind").fail("unknown event kind '" + kind + "'");
  e.kind = *k;
  if (n.has("dir")) e.dir = read_wire(n.at("dir"));
  if (n.has("payload")) e.payload = read_payload(n.at("payload"));
  if (n.has("ab")) e.ab = read_bit(n.at("ab"));
  if (n.has("seq")) e.seq = n.at("seq").integer();
  if (n.has("token")) e.token = n.at("token").string();
  return e;
}

template <Machine P>
BasicTrace<P> read_body(const Node& root, const ProtocolParams& params) {
  BasicTrace<P> t;
  t.config_init = root.has("config_init")
                      ? read_config<P>(root.at("config_init"), params)
                      : clean_configuration<P>(params);
  t.config_final = t.config_init;
  t.policy = root.has("policy") ? read_policy(root.at("policy"))
                                : SchedulerPolicy{LockStep{}};
  if (root.has("seed")) t.seed = root.at("seed").unsigned_integer();
  if (root.has("app_messages")) {
    const Node m = root.at("app_messages");
    for (std::size_t i = 0; i < m.size(); ++i) {
      t.app_messages.push_back(m.at(i).string());
    }
  }
  if (root.has("events")) {
    const Node ev = root.at("events");
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
      Event e = read_event(ev.at(i));
      if (i > 0 && e.step <= prev) {
        ev.at(i).at("step").fail("event steps must strictly increase");
      }
      prev = e.step;
      t.events.push_back(std::move(e));
    }
  }
  // A document without events is vacuously quiescent.
  t.quiescent = root.has("quiescent") ? root.at("quiescent").boolean()
                                      : t.events.empty();
  if (root.has("steps_taken")) {
    t.steps_taken = root.at("steps_taken").unsigned_integer();
  }
  return t;
}

template <Machine P>
Json violation_json(const Violation<P>& v) {
  Json d = Json::array();
  for (const auto& t : v.delivered) d.push_back(t);
  return Json{{"started_idle", v.started_idle},
              {"delivered", d},
              {"config_init", config_json(v.root)},
              {"policy", policy_json(witness_policy(v))}};
}

Json explore_params_json(const ExploreParams& params, ProtocolKind kind) {
  return Json{{"protocol", std::string(to_string(kind))},
              {"params", Json{{"c", params.capacity}}},
              {"app_messages", params.app_messages},
              {"token_alphabet", effective_alphabet(params)},
              {"init", std::string(to_string(params.init_mode))},
              {"depth_bound", params.depth_bound}};
}

Json property_json(const PropertyResult& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["bound"] = r.bound;
  j["least_bound"] = r.least_bound ? Json(*r.least_bound) : Json();
  j["witness"] = r.witness;
  return j;
}

}  // namespace

template <Machine P>
std::string write_trace(const BasicTrace<P>& trace) {
  Json j;
  j["version"] = kTraceVersion;
  j["protocol"] = std::string(to_string(P::kKind));
  j["params"] = Json{{"c", trace.config_init.params.capacity()}};
  j["policy"] = policy_json(trace.policy);
  j["seed"] = trace.seed ? Json(*trace.seed) : Json();
  j["app_messages"] = trace.app_messages;
  j["config_init"] = config_json(trace.config_init);
  Json events = Json::array();
  for (const auto& e : trace.events) events.push_back(event_json(e));
  j["events"] = std::move(events);
  j["quiescent"] = trace.quiescent;
  j["steps_taken"] = trace.steps_taken;
  return dump(j);
}

template std::string write_trace<Sdl>(const BasicTrace<Sdl>&);
template std::string write_trace<Abp>(const BasicTrace<Abp>&);

const std::vector<Event>& LoadedTrace::events() const {
  return std::visit([](const auto& t) -> const std::vector<Event>& {
    return t.events;
  }, trace);
}

bool LoadedTrace::quiescent() const {
  return std::visit([](const auto& t) { return t.quiescent; }, trace);
}

LoadedTrace read_trace(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TraceParseError("byte " + std::to_string(e.byte), e.what());
  }
  const Node root(doc, "");
  if (!doc.is_object()) root.fail("expected a trace object");
  const auto version = root.at("version").integer();
  if (version != kTraceVersion) {
    root.at("version").fail("unsupported version " + std::to_string(version));
  }
  ProtocolKind kind = ProtocolKind::Sdl;
  if (root.has("protocol")) {
    const auto p = parse_protocol(root.at("protocol").string());
    if (!p) root.at("protocol").fail("unknown protocol");
    kind = *p;
  }
  const Node c = root.at("params").at("c");
  const auto cap = c.integer();
  if (cap < 1 || cap > 1'000'000) c.fail("capacity must be >= 1");
  const ProtocolParams params(static_cast<int>(cap));
  if (kind == ProtocolKind::Sdl) return LoadedTrace{read_body<Sdl>(root, params)};
  return LoadedTrace{read_body<Abp>(root, params)};
}

std::string write_steps(std::span<const Step> steps) {
  return dump(steps_json(steps));
}

std::vector<Step> read_steps(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TraceParseError("byte " + std::to_string(e.byte), e.what());
  }
  return read_step_list(Node(doc, ""));
}

std::string write_report(const SpecReport& report) {
  Json j;
  j["quiescent"] = report.quiescent;
  j["bounds"] = Json{{"alpha", report.bounds.alpha},
                     {"beta", report.bounds.beta},
                     {"gamma", report.bounds.gamma},
                     {"delta", report.bounds.delta}};
  j["properties"] = Json{{"loss", property_json(report.loss)},
                         {"duplication", property_json(report.duplication)},
                         {"creation", property_json(report.creation)},
                         {"reordering", property_json(report.reordering)}};
  Json sdl;
  sdl["verdict"] = std::string(to_string(report.characterization.verdict));
  sdl["prefix"] = report.characterization.prefix
                      ? Json(*report.characterization.prefix)
                      : Json();
  j["characterization"] = sdl;
  j["overall"] = std::string(to_string(report.overall()));
  return dump(j);
}

std::string format_report(const SpecReport& report) {
  std::ostringstream os;
  auto line = [&](std::string_view name, const PropertyResult& r) {
    os << name << ": " << to_string(r.verdict) << " (bound " << r.bound;
    if (r.least_bound) os << ", least " << *r.least_bound;
    os << ")";
    if (!r.witness.empty()) {
      os << " witness";
      for (auto w : r.witness) os << ' ' << w;
    }
    os << '\n';
  };
  if (!report.quiescent) os << "trace is not quiescent\n";
  line("loss", report.loss);
  line("duplication", report.duplication);
  line("creation", report.creation);
  line("reordering", report.reordering);
  os << "R = S or m.S: " << to_string(report.characterization.verdict);
  if (report.characterization.prefix) {
    os << " (m = " << *report.characterization.prefix << ")";
  }
  os << "\noverall: " << to_string(report.overall()) << '\n';
  return os.str();
}

template <Machine P>
std::string write_explore_report(const ExploreReport<P>& report,
                                 const ExploreParams& params) {
  Json j = explore_params_json(params, P::kKind);
  j["initial_states"] = report.initial_states;
  j["visited_states"] = report.visited_states;
  j["transitions"] = report.transitions;
  j["max_depth"] = report.max_depth;
  j["exhausted"] = report.exhausted;
  j["violating_states"] = report.violating_states;
  j["violating_from_idle"] = report.violating_from_idle;
  Json w = Json::array();
  for (const auto& v : report.witnesses) w.push_back(violation_json(v));
  j["witnesses"] = std::move(w);
  return dump(j);
}

template <Machine P>
std::string write_witness(const Violation<P>& v, const ExploreParams& params) {
  Json j = explore_params_json(params, P::kKind);
  j.update(violation_json(v));
  return dump(j);
}

template std::string write_explore_report<Sdl>(const ExploreReport<Sdl>&,
                                               const ExploreParams&);
template std::string write_explore_report<Abp>(const ExploreReport<Abp>&,
                                               const ExploreParams&);
template std::string write_witness<Sdl>(const Violation<Sdl>&,
                                        const ExploreParams&);
template std::string write_witness<Abp>(const Violation<Abp>&,
                                        const ExploreParams&);

}  // namespace sdlink
