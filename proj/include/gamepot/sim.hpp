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

#ifndef GAMEPOT_SIM_HPP_
#define GAMEPOT_SIM_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gamepot/clock.hpp"
#include "gamepot/shell.hpp"

namespace gamepot::sim {

/// What a persona saw after sending a line.
enum class Outcome { normal, blocked, insulted, not_found };

std::string to_string(Outcome o);

/// Maps shell output to an outcome class. `input` supplies the command word
/// so policy blocks ("bash: cmd: <reason from the block corpus>") can be told
/// apart from genuine shell errors that share the bash framing.
Outcome classify(const std::string& input, const std::string& output);

enum class ReactionKind {
  proceed,
  repeat,           // resend the same line, up to `times`, until it passes
  try_alternative,  // send `alternative` once, then move on
  insult_back,      // reply with a taunt of its own, then move on
  press_return,     // send `times` empty lines, then move on
  resign,           // hang up without exiting
};

struct Reaction {
  ReactionKind kind = ReactionKind::proceed;
  int times = 0;
  std::string alternative;
};

struct Step {
  std::string input;
  Reaction on_block;
  Reaction on_insult;
  Reaction on_not_found;
};

/// A scripted attacker. Scripts always terminate: repeats are bounded per
/// reaction and the whole run is capped at max_actions inputs.
struct Persona {
  std::string name;
  std::string description;
  std::vector<Step> script;
  int loops = 1;               // times the script is replayed
  bool resign_at_end = false;  // hang up instead of typing exit
  int max_actions = 400;

  /// Throws DomainError on unbounded or self-contradictory scripts.
  void validate() const;
};

/// The shipped cast, in rotation order: miner-installer, privilege-escalator,
/// destroyer, fortifier, repeater, return-spammer, login-only, explorer.
const std::vector<Persona>& builtin_personas();
const Persona* find_persona(const std::string& name);

struct TranscriptEntry {
  std::string input;
  std::string output;
  Outcome outcome = Outcome::normal;
  TimeMs at_ms = 0;
  /// False for a line the session refused to process because a lifetime
  /// limit closed it on arrival; such lines never reach the command log.
  bool delivered = true;
};

struct Transcript {
  std::string persona;
  std::string session_id;
  std::vector<TranscriptEntry> entries;
  std::string close_reason;
  TimeMs started_ms = 0;
  TimeMs ended_ms = 0;

  /// Non-empty inputs; matches the shell's command counting.
  int commands() const;
};

/// Where a persona types. Implementations: an in-process shell session or a
/// TCP connection to a running service.
class Terminal {
 public:
  virtual ~Terminal() = default;
  virtual std::string send(const std::string& line) = 0;
  virtual void hangup() = 0;
  virtual bool alive() const = 0;
  virtual std::string session_id() const = 0;
  virtual std::string close_reason() const = 0;
};

/// Drives a ShellSession directly. Does not own it.
class InProcessTerminal final : public Terminal {
 public:
  explicit InProcessTerminal(shell::ShellSession& session)
      : session_(session) {}
  std::string send(const std::string& line) override;
  void hangup() override;
  bool alive() const override { return !session_.is_closed(); }
  std::string session_id() const override { return session_.session_id(); }
  std::string close_reason() const override {
    return session_.close_reason();
  }

 private:
  shell::ShellSession& session_;
};

/// Connects and logs in over the line protocol. Throws std::runtime_error
/// when the connection or login fails.
class TcpTerminal final : public Terminal {
 public:
  TcpTerminal(const std::string& host, int port, const std::string& username,
              const std::string& password, int io_timeout_ms = 5000);
  ~TcpTerminal() override;
  std::string send(const std::string& line) override;
  void hangup() override;
  bool alive() const override { return fd_ >= 0; }
  std::string session_id() const override { return "(remote)"; }
  std::string close_reason() const override { return close_reason_; }

 private:
  std::string read_until_prompt();

  int fd_ = -1;
  int timeout_ms_;
  std::string buffer_;
  std::string close_reason_;
};

struct RunOptions {
  std::uint64_t seed = 1;
  /// Advanced by the think-time draw before every input when set; leave null
  /// to send back to back (e.g. against a live service on a real clock).
  FakeClock* clock = nullptr;
  int think_min_ms = 1000;
  int think_max_ms = 10000;
};

/// Plays one persona to completion. Deterministic under (options.seed,
/// policy seed, injected clock).
Transcript run_persona(const Persona& persona, Terminal& terminal,
                       const RunOptions& options);

// ---------------------------------------------------------------------------
// Campaigns: batches of sessions per instance, logged for the analyzer.
// ---------------------------------------------------------------------------

struct InstanceSpec {
  std::string label;               // stamped into events ("gamepot", ...)
  std::string policy_name = "gamepot";
  std::string policy_config_json;  // wins over policy_name when set
  int sessions = 0;
  std::string log_path;
  std::string username = "bruno";  // leaked account the attackers use
};

struct CampaignOptions {
  std::uint64_t seed = 20260814;
  TimeMs base_epoch_ms = 1723629600000;  // fixed so reruns are byte-identical
  std::vector<std::string> personas;     // rotation; empty uses all builtins
  int think_min_ms = 1000;
  int think_max_ms = 10000;
};

struct CampaignResult {
  struct Instance {
    std::string label;
    int sessions = 0;
    std::string log_path;
  };
  std::vector<Instance> instances;
};

/// Sequentially simulates `sessions` attacks per instance under an injected
/// clock (no real sleeps) and writes one NDJSON log per instance, complete
/// with connect/login/close framing. Rerunning with identical inputs
/// reproduces the logs byte for byte.
CampaignResult run_campaign(const std::vector<InstanceSpec>& instances,
                            const CampaignOptions& options);

}  // namespace gamepot::sim

#endif  // GAMEPOT_SIM_HPP_
