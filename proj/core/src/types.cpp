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

#include "sdlink/types.hpp"

namespace sdlink {

std::ostream& operator<<(std::ostream& os, const Payload& p) {
  if (p.is_synchro()) return os << "<SYNCHRO>";
  return os << '"' << p.token() << '"';
}

std::ostream& operator<<(std::ostream& os, const DataPacket& p) {
  return os << "data(" << p.payload << ", " << p.ab.value << ')';
}

std::ostream& operator<<(std::ostream& os, const AckPacket& p) {
  return os << "ack(" << p.payload << ", " << p.ab.value << ')';
}

std::string_view to_string(WireKind kind) {
  return kind == WireKind::Data ? "data" : "ack";
}

}  // namespace sdlink
