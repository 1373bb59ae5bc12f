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

#include "sdlink/checker.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_set>

namespace sdlink {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

std::vector<std::string> MsgSequence::tokens() const {
  std::vector<std::string> out;
  out.reserve(items_.size());
  for (const auto& o : items_) out.push_back(o.token);
  return out;
}

MsgSequence MsgSequence::prefix(std::size_t j) const {
  j = std::min(j, items_.size());
  return MsgSequence({items_.begin(), items_.begin() + static_cast<long>(j)});
}

MsgSequence MsgSequence::suffix(std::size_t i) const {
  i = std::min(i, items_.size());
  return MsgSequence({items_.begin() + static_cast<long>(i), items_.end()});
}

Projection project(std::span<const Event> events) {
  Projection p;
  for (const auto& e : events) {
    switch (e.kind) {
      case Event::Kind::AppSend:
        p.sent.push_back({e.token.value_or(""), Occurrence::Origin::AppSent,
                          e.seq.value_or(-1)});
        break;
      case Event::Kind::MsgDelivered:
        p.delivered.push_back({e.token.value_or(""),
                               Occurrence::Origin::DeliveredAt,
                               static_cast<std::int64_t>(e.step)});
        break;
      case Event::Kind::AckDelivered:
        if (e.seq) p.acked.insert(*e.seq);
        break;
      default:
        break;
    }
  }
  return p;
}

namespace {

PropertyResult finish(int bound, int least, std::vector<std::size_t> witness) {
  PropertyResult r;
  r.bound = bound;
  r.least_bound = least;
  r.verdict = least <= bound ? Verdict::Pass : Verdict::Fail;
  r.witness = std::move(witness);
  return r;
}

/// Position of the first occurrence of each token in `seq`.
std::map<std::string_view, std::size_t> first_positions(Tokens seq) {
  std::map<std::string_view, std::size_t> first;
  for (std::size_t i = 0; i < seq.size(); ++i) first.emplace(seq[i], i);
  return first;
}

}  // namespace

PropertyResult check_loss(Tokens sent, Tokens delivered, int alpha) {
  std::unique_ptr<bool[]> mask(new bool[sent.size()]);
  std::fill_n(mask.get(), sent.size(), true);
  return check_loss(sent, delivered, alpha,
                    std::span<const bool>(mask.get(), sent.size()));
}

PropertyResult check_loss(Tokens sent, Tokens delivered, int alpha,
                          std::span<const bool> required) {
  if (required.size() != sent.size()) {
    throw std::invalid_argument("check_loss: mask size mismatch");
  }
  const std::unordered_set<std::string_view> arrived(delivered.begin(),
                                                     delivered.end());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (required[i] && !arrived.contains(sent[i])) missing.push_back(i);
  }
  const int least = missing.empty() ? 0 : static_cast<int>(missing.back()) + 1;
  return finish(alpha, least, std::move(missing));
}

PropertyResult check_duplication(Tokens sent, Tokens delivered, int beta) {
  std::map<std::string_view, int> count;
  for (const auto& t : delivered) ++count[t];
  const auto first = first_positions(delivered);
  const std::unordered_set<std::string_view> sent_set(sent.begin(), sent.end());

  int least = 0;
  std::vector<std::size_t> witness;
  for (const auto& [token, n] : count) {
    if (n <= 1 || !sent_set.contains(token)) continue;
    const std::size_t pos = first.at(token);
    least = std::max(least, static_cast<int>(pos) + 1);
    if (static_cast<int>(pos) >= beta) witness.push_back(pos);
  }
  std::sort(witness.begin(), witness.end());
  return finish(beta, least, std::move(witness));
}

PropertyResult check_creation(Tokens sent, Tokens delivered, int gamma) {
  const std::unordered_set<std::string_view> sent_set(sent.begin(), sent.end());
  const auto first = first_positions(delivered);
  int least = 0;
  std::vector<std::size_t> witness;
  for (std::size_t i = 0; i < delivered.size(); ++i) {
    if (sent_set.contains(delivered[i])) continue;
    const std::size_t pos = first.at(delivered[i]);
    least = std::max(least, static_cast<int>(pos) + 1);
    if (static_cast<int>(pos) >= gamma) witness.push_back(i);
  }
  return finish(gamma, least, std::move(witness));
}

bool parses_as_star(Tokens sent, Tokens tail) {
  const std::size_t n = tail.size();
  const std::size_t m = sent.size();
  // memo[i][j]: 0 unknown, 1 parses, 2 fails.
  std::vector<std::uint8_t> memo((n + 1) * (m + 1), 0);
  auto solve = [&](auto&& self, std::size_t i, std::size_t j) -> bool {
    if (i == n) return true;
    if (j == m) return false;
    auto& slot = memo[i * (m + 1) + j];
    if (slot != 0) return slot == 1;
    bool ok = false;
    // Greedy: extend the current block first, then close it.
    if (tail[i] == sent[j]) ok = self(self, i + 1, j);
    if (!ok) ok = self(self, i, j + 1);
    slot = ok ? 1 : 2;
    return ok;
  };
  return solve(solve, 0, 0);
}

PropertyResult check_reordering(Tokens sent, Tokens delivered, int delta) {
  int least = static_cast<int>(delivered.size());
  for (std::size_t d = 0; d <= delivered.size(); ++d) {
    if (parses_as_star(sent, delivered.subspan(d))) {
      least = static_cast<int>(d);
      break;
    }
  }
  std::vector<std::size_t> witness;
  for (int d = delta; d < least; ++d) witness.push_back(d);
  return finish(delta, least, std::move(witness));
}

SdlResult check_sdl(Tokens sent, Tokens delivered) {
  SdlResult r;
  if (std::equal(sent.begin(), sent.end(), delivered.begin(), delivered.end())) {
    r.verdict = Verdict::Pass;
    return r;
  }
  if (delivered.size() == sent.size() + 1 &&
      std::equal(sent.begin(), sent.end(), delivered.begin() + 1)) {
    r.verdict = Verdict::Pass;
    r.prefix = delivered.front();
    return r;
  }
  r.verdict = Verdict::Fail;
  return r;
}

Verdict SpecReport::overall() const {
  const Verdict all[] = {loss.verdict, duplication.verdict, creation.verdict,
                         reordering.verdict};
  if (std::ranges::any_of(all, [](Verdict v) { return v == Verdict::Unknown; })) {
    return Verdict::Unknown;
  }
  if (std::ranges::all_of(all, [](Verdict v) { return v == Verdict::Pass; })) {
    return Verdict::Pass;
  }
  return Verdict::Fail;
}

SpecReport check_trace(std::span<const Event> events, bool quiescent,
                       const SpecBounds& bounds) {
  SpecReport report;
  report.bounds = bounds;
  report.quiescent = quiescent;
  if (!quiescent) {
    report.loss.bound = bounds.alpha;
    report.duplication.bound = bounds.beta;
    report.creation.bound = bounds.gamma;
    report.reordering.bound = bounds.delta;
    return report;
  }

  const Projection p = project(events);
  const auto sent = p.sent.tokens();
  const auto delivered = p.delivered.tokens();
  std::unique_ptr<bool[]> required(new bool[sent.size()]);
  for (std::size_t i = 0; i < sent.size(); ++i) {
    required[i] = p.acked.contains(p.sent.items()[i].index);
  }

  report.loss = check_loss(sent, delivered, bounds.alpha,
                           std::span<const bool>(required.get(), sent.size()));
  report.duplication = check_duplication(sent, delivered, bounds.beta);
  report.creation = check_creation(sent, delivered, bounds.gamma);
  report.reordering = check_reordering(sent, delivered, bounds.delta);
  report.characterization = check_sdl(sent, delivered);

  const std::unordered_set<std::string_view> distinct(sent.begin(), sent.end());
  const bool all_acked =
      std::all_of(required.get(), required.get() + sent.size(),
                  [](bool b) { return b; });
  if (report.characterization.verdict == Verdict::Pass &&
      distinct.size() == sent.size() && all_acked) {
    const bool consistent =
        check_loss(sent, delivered, 0).verdict == Verdict::Pass &&
        check_duplication(sent, delivered, 1).verdict == Verdict::Pass &&
        check_creation(sent, delivered, 1).verdict == Verdict::Pass &&
        check_reordering(sent, delivered, 1).verdict == Verdict::Pass;
    if (!consistent) {
      throw std::logic_error(
          "checker inconsistency: R = S or m.S but a (0,1,1,1) check failed");
    }
  }
  return report;
}

}  // namespace sdlink
