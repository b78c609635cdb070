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

#ifndef GAMEPOT_SHELL_HPP_
#define GAMEPOT_SHELL_HPP_

#include <memory>
#include <string>
#include <vector>

#include "gamepot/capture.hpp"
#include "gamepot/clock.hpp"
#include "gamepot/fakefs.hpp"
#include "gamepot/log.hpp"
#include "gamepot/policy.hpp"

namespace gamepot::shell {

struct ShellConfig {
  std::string hostname = "svr04";
  std::string username = "root";
  std::string instance = "gamepot";  // stamped on every event
  int hard_cap_seconds = 900;        // absolute session lifetime
  int idle_timeout_seconds = 180;    // enforced between inputs
  bool log_keystrokes = false;       // per-character events for each line
};

/// One attacker-facing shell. Line oriented: the transport (or simulator)
/// feeds complete input lines and forwards whatever comes back.
///
/// Every non-empty line counts as one command and is logged; the line is then
/// split on ';' and '&&' and each part passes through the policy. Allowed
/// parts are emulated against the session-private file system; blocked parts
/// answer "bash: <cmd>: <reason>"; insults speak for themselves. "exit" and
/// "logout" bypass the policy and end the session.
///
/// Lifetime limits: a line arriving at or past hard_cap_seconds (or after
/// idle_timeout_seconds of silence) closes the session instead of being
/// processed. Input after close throws SessionStateError.
class ShellSession {
 public:
  ShellSession(std::string session_id, std::string src_ip,
               std::unique_ptr<policy::Policy> policy, Clock& clock,
               logging::Writer* log, FakeFs fs, ShellConfig config = {},
               Fetcher* fetcher = nullptr, CaptureStore* captures = nullptr);

  /// Output for one input line; "" when the command produced none. The
  /// trailing newline is included whenever there is output.
  std::string handle_line(const std::string& line);

  /// Emits the closing event (reason, duration, command count). Throws
  /// SessionStateError when already closed.
  void close(const std::string& reason);

  bool is_closed() const { return closed_; }
  const std::string& close_reason() const { return close_reason_; }
  int command_count() const { return command_count_; }
  const std::string& session_id() const { return session_id_; }
  const ShellConfig& config() const { return config_; }
  TimeMs started_ms() const { return started_ms_; }
  TimeMs last_activity_ms() const { return last_activity_ms_; }

  /// "root@svr04:~# "
  std::string prompt() const;

  /// Session-private view, exposed for inspection in tests.
  const FakeFs& fs() const { return fs_; }
  const std::string& cwd() const { return cwd_; }

 private:
  struct Exec {
    std::string out;
    bool session_ended = false;
  };

  void log_event(logging::Event event);
  void log_policy(const policy::PolicyDecision& decision,
                  const std::string& command);
  /// Ownership rule for destructive operations: root touches anything;
  /// other users only what they own, plus the world-writable /tmp.
  bool may_modify(const std::string& abs) const;
  Exec run_segment(const std::string& segment);
  std::string emulate(std::vector<std::string> argv);
  std::string run_simple(const std::vector<std::string>& argv,
                         const std::string& stdin_text);
  std::string do_download(const std::string& tool, const std::string& url,
                          const std::string& save_as, bool to_stdout);

  std::string session_id_;
  std::string src_ip_;
  std::unique_ptr<policy::Policy> policy_;
  Clock& clock_;
  logging::Writer* log_;
  FakeFs fs_;
  ShellConfig config_;
  Fetcher* fetcher_;
  std::unique_ptr<Fetcher> default_fetcher_;
  CaptureStore* captures_;
  std::unique_ptr<CaptureStore> default_captures_;

  std::string cwd_;
  std::string home_;
  TimeMs started_ms_ = 0;
  TimeMs last_activity_ms_ = 0;
  int command_count_ = 0;
  bool closed_ = false;
  std::string close_reason_;
  std::vector<std::string> history_;
};

}  // namespace gamepot::shell

#endif  // GAMEPOT_SHELL_HPP_
