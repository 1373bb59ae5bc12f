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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sdlink/checker.hpp"
#include "sdlink/oracle.hpp"
#include "sdlink/sim.hpp"
#include "sdlink/trace_io.hpp"

namespace sdlink::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes to a sibling temp file, then renames over the target.
void write_atomically(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw UsageError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

/// "a..b", half-open.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(std::string_view s) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) throw UsageError("seed range must be a..b");
  const auto a = parse_u64(s.substr(0, dots), "seed");
  const auto b = parse_u64(s.substr(dots + 2), "seed");
  if (b <= a) throw UsageError("seed range is empty");
  return {a, b};
}

std::vector<std::string> numbered_tokens(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("m" + std::to_string(i));
  return out;
}

std::vector<std::string> letter_tokens(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('A' + i))
                         : "A" + std::to_string(i));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// --- run ---------------------------------------------------------------------

struct RunOptions {
  int capacity = 1;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  int messages = 1;
  std::string policy = "random";
  double p_deliver = 0.6;
  double p_lose = 0.1;
  int patience = 0;
  std::string protocol = "sdl";
  std::string scenario;
  std::string init = "clean";
  std::string alphabet;
  std::uint64_t max_steps = 0;
  std::string out = ".";
  int jobs = 1;
};

struct RunOutcome {
  std::string line;
  bool quiescent = false;
};

template <Machine P>
RunOutcome run_one(const RunOptions& o, std::uint64_t seed,
                   const std::vector<std::string>& msgs,
                   const std::vector<std::string>& alphabet) {
  const ProtocolParams params(o.capacity);
  BasicConfiguration<P> init =
      o.init == "arbitrary" ? arbitrary_configuration<P>(seed, params, alphabet)
                            : clean_configuration<P>(params);
  SchedulerPolicy policy = LockStep{};
  if (o.policy == "random") {
    policy = RandomFair{seed, o.p_deliver, o.p_lose, o.patience};
  }
  const std::uint64_t max_steps =
      o.max_steps ? o.max_steps
                  : 200ull * static_cast<std::uint64_t>(6 * o.capacity + 4) *
                        static_cast<std::uint64_t>(std::max<std::size_t>(msgs.size(), 1));
  BasicTrace<P> trace = run(init, policy, msgs, max_steps);
  // Lock-step runs still carry the seed that chose the initial configuration.
  trace.seed = seed;
  const fs::path path = fs::path(o.out) /
                        ("trace-" + std::string(to_string(P::kKind)) + "-c" +
                         std::to_string(o.capacity) + "-seed" +
                         std::to_string(seed) + ".json");
  write_atomically(path, write_trace(trace));
  RunOutcome r;
  r.quiescent = trace.quiescent;
  r.line = path.string() + ": " +
           (trace.quiescent ? "quiescent" : "NOT quiescent") + " after " +
           std::to_string(trace.steps_taken) + " steps";
  return r;
}

template <Machine P>
RunOutcome run_scenario(const RunOptions& o, ScenarioId id) {
  ScenarioSetup<P> s = scenario<P>(id);
  BasicTrace<P> trace =
      run(s.config, s.policy, s.app_messages, scenario_max_steps(id));
  const fs::path path = fs::path(o.out) /
                        ("scenario-" + std::string(to_string(id)) + "-" +
                         std::string(to_string(P::kKind)) + ".json");
  write_atomically(path, write_trace(trace));
  RunOutcome r;
  r.quiescent = trace.quiescent;
  r.line = path.string() + ": " +
           (trace.quiescent ? "quiescent" : "NOT quiescent") + " after " +
           std::to_string(trace.steps_taken) + " steps";
  return r;
}

int cmd_run(const RunOptions& o, std::ostream& out) {
  const auto kind = parse_protocol(o.protocol);
  if (!kind) throw UsageError("unknown protocol '" + o.protocol + "'");
  if (o.policy != "random" && o.policy != "lockstep") {
    throw UsageError("policy must be random or lockstep");
  }
  if (o.init != "clean" && o.init != "arbitrary") {
    throw UsageError("init must be clean or arbitrary");
  }
  if (o.capacity < 1) throw UsageError("capacity must be >= 1");
  if (o.messages < 0) throw UsageError("messages must be >= 0");
  try {
    validate(RandomFair{0, o.p_deliver, o.p_lose, o.patience});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (!o.scenario.empty()) {
    const auto id = parse_scenario(o.scenario);
    if (!id) throw UsageError("unknown scenario '" + o.scenario + "'");
    const RunOutcome r = *kind == ProtocolKind::Sdl ? run_scenario<Sdl>(o, *id)
                                                    : run_scenario<Abp>(o, *id);
    out << r.line << '\n';
    return r.quiescent ? kPass : kIncomplete;
  }

  std::uint64_t first = o.seed.value_or(0);
  std::uint64_t last = first + 1;
  if (!o.seeds.empty()) {
    if (o.seed) throw UsageError("give --seed or --seeds, not both");
    std::tie(first, last) = parse_seed_range(o.seeds);
  }
  const auto msgs = numbered_tokens(o.messages);
  std::vector<std::string> alphabet = split_list(o.alphabet);
  if (alphabet.empty()) {
    alphabet = msgs;
    alphabet.push_back("g");
  }

  const std::size_t n = last - first;
  std::vector<RunOutcome> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = *kind == ProtocolKind::Sdl
                         ? run_one<Sdl>(o, first + i, msgs, alphabet)
                         : run_one<Abp>(o, first + i, msgs, alphabet);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::clamp(o.jobs, 1, 64);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all_quiescent = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
    out << results[i].line << '\n';
    all_quiescent = all_quiescent && results[i].quiescent;
  }
  return all_quiescent ? kPass : kIncomplete;
}

// --- check -------------------------------------------------------------------

struct CheckOptions {
  std::string trace;
  SpecBounds bounds;
  std::string report;
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  LoadedTrace loaded;
  try {
    loaded = read_trace(read_file(o.trace));
  } catch (const TraceParseError& e) {
    err << o.trace << ": parse error at " << e.what() << '\n';
    return kUsage;
  }
  const SpecReport report =
      check_trace(loaded.events(), loaded.quiescent(), o.bounds);
  out << format_report(report);
  if (!o.report.empty()) write_atomically(o.report, write_report(report));
  switch (report.overall()) {
    case Verdict::Pass:
      return kPass;
    case Verdict::Fail:
      return kViolation;
    case Verdict::Unknown:
      return kIncomplete;
  }
  return kIncomplete;
}

// --- exhaustive --------------------------------------------------------------

struct ExhaustiveOptions {
  int capacity = 1;
  int messages = 1;
  std::string alphabet;
  std::string init = "clean";
  int depth = 200;
  std::string protocol = "sdl";
  int jobs = 1;
  std::string report;
  std::string witness = "witness.json";
};

template <Machine P>
int explore_with(const ExploreParams& params, const ExhaustiveOptions& o,
                 std::ostream& out) {
  const ExploreReport<P> r = explore<P>(params);
  out << "protocol " << to_string(P::kKind) << ", c=" << params.capacity
      << ", init " << to_string(params.init_mode) << '\n'
      << "initial states: " << r.initial_states << '\n'
      << "visited states: " << r.visited_states << '\n'
      << "transitions: " << r.transitions << '\n'
      << "max depth: " << r.max_depth << '\n'
      << "frontier: " << (r.exhausted ? "exhausted" : "PARTIAL (depth bound)")
      << '\n'
      << "violating states: " << r.violating_states << " ("
      << r.violating_from_idle << " from an idle sender)\n";
  if (!o.report.empty()) {
    write_atomically(o.report, write_explore_report(r, params));
  }
  if (!r.witnesses.empty() && !o.witness.empty()) {
    write_atomically(o.witness, write_witness(r.witnesses.front(), params));
    out << "witness: " << o.witness << '\n';
  }
  if (r.violating_states > 0) return kViolation;
  return r.exhausted ? kPass : kIncomplete;
}

int cmd_exhaustive(const ExhaustiveOptions& o, std::ostream& out) {
  const auto kind = parse_protocol(o.protocol);
  if (!kind) throw UsageError("unknown protocol '" + o.protocol + "'");
  const auto mode = parse_init_mode(o.init);
  if (!mode) throw UsageError("init must be clean or all");
  ExploreParams params;
  params.capacity = o.capacity;
  params.app_messages = letter_tokens(o.messages);
  params.token_alphabet = split_list(o.alphabet);
  params.depth_bound = o.depth;
  params.init_mode = *mode;
  params.jobs = o.jobs;
  try {
    return *kind == ProtocolKind::Sdl ? explore_with<Sdl>(params, o, out)
                                      : explore_with<Abp>(params, o, out);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Stabilizing data-link simulator, checker and explorer",
               "sdlink"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run_cmd = app.add_subcommand("run", "Simulate runs and write traces");
  run_cmd->add_option("--capacity", ro.capacity, "Channel capacity c");
  run_cmd->add_option("--seed", ro.seed, "Single seed");
  run_cmd->add_option("--seeds", ro.seeds, "Seed range a..b (half-open)");
  run_cmd->add_option("--messages", ro.messages, "App messages per run");
  run_cmd->add_option("--policy", ro.policy, "random | lockstep");
  run_cmd->add_option("--p-deliver", ro.p_deliver, "Delivery probability");
  run_cmd->add_option("--p-lose", ro.p_lose, "Loss probability");
  run_cmd->add_option("--patience", ro.patience,
                      "Resends before a forced delivery (0 = 4c+4)");
  run_cmd->add_option("--protocol", ro.protocol, "sdl | abp");
  run_cmd->add_option("--scenario", ro.scenario,
                      "ghost-tight | dup-tight | reorder-tight | abp-fail");
  run_cmd->add_option("--init", ro.init, "clean | arbitrary");
  run_cmd->add_option("--alphabet", ro.alphabet,
                      "Comma-separated ghost tokens for --init arbitrary");
  run_cmd->add_option("--max-steps", ro.max_steps,
                      "Step budget (0 = 200*(6c+4)*messages)");
  run_cmd->add_option("--out", ro.out, "Output directory");
  run_cmd->add_option("--jobs", ro.jobs, "Parallel workers");

  CheckOptions co;
  auto* check_cmd = app.add_subcommand("check", "Check a trace file");
  check_cmd->add_option("trace", co.trace, "Trace document")->required();
  check_cmd->add_option("--alpha", co.bounds.alpha, "Loss bound");
  check_cmd->add_option("--beta", co.bounds.beta, "Duplication bound");
  check_cmd->add_option("--gamma", co.bounds.gamma, "Creation bound");
  check_cmd->add_option("--delta", co.bounds.delta, "Reordering bound");
  check_cmd->add_option("--report", co.report, "Write a JSON verdict report");

  ExhaustiveOptions eo;
  auto* ex_cmd =
      app.add_subcommand("exhaustive", "Explore every adversary choice");
  ex_cmd->add_option("--capacity", eo.capacity, "Channel capacity c");
  ex_cmd->add_option("--messages", eo.messages, "App messages (A, B, ...)");
  ex_cmd->add_option("--alphabet", eo.alphabet,
                     "Comma-separated token alphabet (default: messages + g)");
  ex_cmd->add_option("--init", eo.init, "clean | all");
  ex_cmd->add_option("--depth", eo.depth, "BFS depth bound");
  ex_cmd->add_option("--protocol", eo.protocol, "sdl | abp");
  ex_cmd->add_option("--jobs", eo.jobs, "Worker threads");
  ex_cmd->add_option("--report", eo.report, "Write a JSON report");
  ex_cmd->add_option("--witness", eo.witness,
                     "Where to write the first violation witness");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(ro, out);
    if (*check_cmd) return cmd_check(co, out, err);
    return cmd_exhaustive(eo, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kViolation;
  }
}

}  // namespace sdlink::cli
