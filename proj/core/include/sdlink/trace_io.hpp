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

// JSON documents for traces, verdict reports and exploration reports.
// Output is deterministic: fixed key order, no timestamps.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "sdlink/checker.hpp"
#include "sdlink/oracle.hpp"
#include "sdlink/sim.hpp"

namespace sdlink {

inline constexpr int kTraceVersion = 1;

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::string location, const std::string& what)
      : std::runtime_error(location + ": " + what),
        location_(std::move(location)) {}

  /// A byte offset for syntax errors, a JSON pointer for schema errors.
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

template <Machine P>
std::string write_trace(const BasicTrace<P>& trace);

struct LoadedTrace {
  std::variant<Trace, AbpTrace> trace;

  ProtocolKind protocol() const {
    return trace.index() == 0 ? ProtocolKind::Sdl : ProtocolKind::Abp;
  }
  const std::vector<Event>& events() const;
  bool quiescent() const;
};

/// Throws TraceParseError on malformed text or a document that violates the
/// schema (unknown kinds, wrong-wire packets, over-capacity channels, invalid
/// initial configuration).
LoadedTrace read_trace(std::string_view text);

std::string write_steps(std::span<const Step> steps);
std::vector<Step> read_steps(std::string_view text);

/// Machine-readable verdict report.
std::string write_report(const SpecReport& report);
/// Short human-readable verdict summary, one line per property.
std::string format_report(const SpecReport& report);

template <Machine P>
std::string write_explore_report(const ExploreReport<P>& report,
                                 const ExploreParams& params);

/// One witness as a standalone document: root configuration plus the
/// replayable Scripted step list.
template <Machine P>
std::string write_witness(const Violation<P>& v, const ExploreParams& params);

}  // namespace sdlink
