// Copyright 2026 The Gamepot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEPOT_CLOCK_HPP_
#define GAMEPOT_CLOCK_HPP_

#include <atomic>
#include <cstdint>
#include <string>

namespace gamepot {

/// Milliseconds since the Unix epoch, UTC.
using TimeMs = std::int64_t;

/// Time source. Everything that needs "now" takes one of these; no component
/// reads wall time directly, so duration logic is testable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimeMs now_ms() = 0;
};

class SystemClock final : public Clock {
 public:
  TimeMs now_ms() override;
};

/// Manually advanced clock for tests and simulation.
class FakeClock final : public Clock {
 public:
  explicit FakeClock(TimeMs start_ms = 0) : now_(start_ms) {}
  TimeMs now_ms() override { return now_.load(); }
  void advance_ms(TimeMs delta) { now_ += delta; }
  void advance_seconds(double s) {
    now_ += static_cast<TimeMs>(s * 1000.0 + 0.5);
  }
  void set_ms(TimeMs t) { now_ = t; }

 private:
  std::atomic<TimeMs> now_;
};

/// "2018-10-05T14:02:11.042Z" — ISO-8601 UTC with milliseconds; lexicographic
/// order matches chronological order.
std::string format_iso8601_ms(TimeMs ms);

/// Inverse of format_iso8601_ms. Throws DomainError on malformed input.
TimeMs parse_iso8601_ms(const std::string& text);

}  // namespace gamepot

#endif  // GAMEPOT_CLOCK_HPP_
