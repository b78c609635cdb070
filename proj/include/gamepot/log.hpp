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

#ifndef GAMEPOT_LOG_HPP_
#define GAMEPOT_LOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamepot/clock.hpp"

namespace gamepot::logging {

// Event ids. One NDJSON object per line; the schema is documented in
// docs/log-schema.md.
inline constexpr char kEvConnect[] = "hp.session.connect";
inline constexpr char kEvLoginSuccess[] = "hp.login.success";
inline constexpr char kEvLoginFailed[] = "hp.login.failed";
inline constexpr char kEvCommandInput[] = "hp.command.input";
inline constexpr char kEvKeystroke[] = "hp.command.keystroke";
inline constexpr char kEvPolicyAction[] = "hp.policy.action";
inline constexpr char kEvDownload[] = "hp.download";
inline constexpr char kEvClosed[] = "hp.session.closed";

/// One log record. The full JSON object is kept verbatim so that parsing and
/// re-serializing a line written by this module reproduces it byte for byte
/// (keys are emitted in sorted order with compact separators).
struct Event {
  nlohmann::json body;

  /// Fresh event with the envelope filled in: schema, eventid, session, and
  /// an ISO-8601 UTC millisecond timestamp.
  static Event make(const std::string& eventid, TimeMs timestamp_ms,
                    const std::string& session);

  std::string eventid() const;
  std::string session() const;
  TimeMs timestamp_ms() const;

  /// Compact single-line JSON, no trailing newline.
  std::string serialize() const;
};

/// Parses one line. Throws LogParseError (line number 0) when the line is not
/// a JSON object or the envelope fields are missing or malformed.
Event parse_event(const std::string& line);

struct ParseResult {
  std::vector<Event> events;
  std::vector<std::string> warnings;  // lenient mode: one entry per bad line
};

/// Reads NDJSON. Blank lines are ignored. In strict mode the first bad line
/// aborts with LogParseError carrying its 1-based number; otherwise bad lines
/// become warnings and parsing continues.
ParseResult parse_log(std::istream& in, bool strict = false);
ParseResult parse_log_file(const std::string& path, bool strict = false);

/// Append-only NDJSON writer, safe for concurrent use. When a write would
/// push the file past max_bytes the log rotates: path.N-1 -> path.N, ...,
/// path -> path.1, dropping the oldest file beyond max_files.
class Writer {
 public:
  struct Options {
    std::string path;
    std::size_t max_bytes = 10 * 1024 * 1024;
    int max_files = 3;  // rotated copies to keep
  };

  explicit Writer(Options options);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void write(const Event& event);
  void flush();
  const Options& options() const { return options_; }

 private:
  void rotate_locked();

  Options options_;
  std::mutex mutex_;
  std::FILE* file_ = nullptr;
  std::size_t bytes_ = 0;
};

// ---------------------------------------------------------------------------
// Session reconstruction from a flat event stream.
// ---------------------------------------------------------------------------

struct SessionSummary {
  std::string session;
  std::string instance;  // honeypot configuration that produced the session
  std::string src_ip;
  TimeMs connect_ms = -1;
  TimeMs login_ms = -1;
  TimeMs close_ms = -1;
  /// close (or last event) minus login (or connect, or first event), seconds.
  double duration_seconds = 0.0;
  int command_count = 0;
  int keystrokes = 0;
  int downloads = 0;
  int logins_failed = 0;
  bool login_succeeded = false;
  bool complete = false;  // saw both connect and close
  std::map<std::string, int> policy_actions;
};

struct SessionsReport {
  std::vector<SessionSummary> sessions;  // ordered by first appearance
  std::vector<std::string> anomalies;
};

SessionsReport sessions_from_events(const std::vector<Event>& events);

}  // namespace gamepot::logging

#endif  // GAMEPOT_LOG_HPP_
