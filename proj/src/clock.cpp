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

#include "gamepot/clock.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "gamepot/errors.hpp"

namespace gamepot {

TimeMs SystemClock::now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch())
      .count();
}

std::string format_iso8601_ms(TimeMs ms) {
  // Floor-divide so pre-epoch times keep millisecond residues in [0, 999].
  TimeMs secs = ms / 1000;
  int milli = static_cast<int>(ms % 1000);
  if (milli < 0) {
    milli += 1000;
    secs -= 1;
  }
  std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, milli);
  return buf;
}

TimeMs parse_iso8601_ms(const std::string& text) {
  int year, mon, day, hour, min, sec, milli;
  char zulu = 0;
  int n = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &year,
                      &mon, &day, &hour, &min, &sec, &milli, &zulu);
  if (n != 8 || zulu != 'Z') {
    throw DomainError("bad ISO-8601 timestamp: " + text);
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = min;
  tm.tm_sec = sec;
  std::time_t secs = timegm(&tm);
  if (secs == static_cast<std::time_t>(-1)) {
    throw DomainError("unrepresentable timestamp: " + text);
  }
  return static_cast<TimeMs>(secs) * 1000 + milli;
}

}  // namespace gamepot
