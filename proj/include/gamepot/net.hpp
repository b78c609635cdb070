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

#ifndef GAMEPOT_NET_HPP_
#define GAMEPOT_NET_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gamepot/capture.hpp"
#include "gamepot/clock.hpp"
#include "gamepot/fakefs.hpp"
#include "gamepot/log.hpp"
#include "gamepot/shell.hpp"

namespace gamepot::net {

struct Credential {
  std::string username;
  std::string password;
  std::string home;  // optional; derived from the username when empty
};

/// Login database. Exact-match checks only; usernames are unique and
/// passwords non-empty.
class CredentialStore {
 public:
  CredentialStore() = default;

  /// Throws DomainError on a duplicate username or an empty password.
  void add(const std::string& username, const std::string& password,
           const std::string& home = "");
  bool check(const std::string& username, const std::string& password) const;
  const Credential* find(const std::string& username) const;
  std::size_t size() const { return creds_.size(); }

  /// {"credentials": [{"username": ..., "password": ..., "home"?: ...}]}
  /// Throws ConfigError on malformed input.
  static CredentialStore from_json(const std::string& text);
  static CredentialStore from_json_file(const std::string& path);

  /// The shipped accounts: root plus the two decoy users, each with a strong
  /// generated password.
  static CredentialStore defaults();

 private:
  std::vector<Credential> creds_;
};

struct BanConfig {
  int max_failures = 5;
  int window_seconds = 60;
  int ban_seconds = 600;
};

/// fail2ban-style ledger. A failure at time t bans the source when the
/// sliding window (t - window, t] then holds max_failures entries; the ban
/// lasts ban_seconds from that failure and expires on its own. Thread safe.
class BanState {
 public:
  explicit BanState(BanConfig config = {});

  void record_failure(const std::string& ip, TimeMs now);
  /// 0 when not banned, otherwise the expiry timestamp.
  TimeMs banned_until(const std::string& ip, TimeMs now) const;
  bool allowed(const std::string& ip, TimeMs now) const {
    return banned_until(ip, now) == 0;
  }
  const BanConfig& config() const { return config_; }

 private:
  BanConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<TimeMs>> failures_;
  std::map<std::string, TimeMs> bans_;
};

struct RateLimitDecision {
  bool allowed = true;
  TimeMs banned_until = 0;
};

RateLimitDecision rate_limit_check(const BanState& state,
                                   const std::string& ip, TimeMs now);

/// Exact-match login. Failures land in BanState; both outcomes are logged
/// (hp.login.success / hp.login.failed). Rejection is a value, not an error.
bool authenticate(const CredentialStore& store, BanState& bans,
                  const std::string& username, const std::string& password,
                  const std::string& source_ip, TimeMs now,
                  logging::Writer* log, const std::string& session_id,
                  const std::string& instance);

struct ServeConfig {
  std::string bind_address = "127.0.0.1";
  int port = 0;                 // 0 picks an ephemeral port
  std::string transport = "tcp";
  std::string policy_name = "gamepot";
  std::string policy_config_json;  // wins over policy_name when set
  std::string instance = "gamepot";
  std::string log_path;         // empty: no log
  std::string capture_dir;      // empty: in-memory captures only
  std::uint64_t seed = 20260814;
  int max_login_attempts = 3;   // per connection
  BanConfig ban;
  shell::ShellConfig shell;
  bool live_fetch = false;      // true: wget/curl really fetch http:// URLs
};

/// Line-oriented TCP front end. One OS thread per connection; every
/// authenticated connection gets a private ShellSession over a copy of the
/// default file system. Banned sources are dropped before any event is
/// written.
///
/// Only the "tcp" transport is built in; "ssh" is recognized and refused
/// with ConfigError so deployments fail loudly instead of silently
/// downgrading.
class Service {
 public:
  Service(ServeConfig config, CredentialStore credentials, Clock& clock);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and starts accepting. Throws ConfigError on bad config and
  /// std::runtime_error when the bind fails.
  void start();
  /// Idempotent. Stops accepting, force-closes live connections, joins
  /// threads, flushes the log.
  void stop();

  int port() const { return port_; }
  bool running() const { return running_.load(); }
  int sessions_started() const { return sessions_started_.load(); }
  BanState& bans() { return bans_; }
  logging::Writer* writer() { return writer_.get(); }

 private:
  void accept_loop();
  void handle_connection(int fd, const std::string& peer_ip);
  std::string next_session_id();

  ServeConfig config_;
  CredentialStore credentials_;
  Clock& clock_;
  BanState bans_;
  shell::FakeFs base_fs_;
  shell::CaptureStore captures_;
  std::unique_ptr<logging::Writer> writer_;
  std::unique_ptr<shell::Fetcher> fetcher_;

  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<int> sessions_started_{0};
  std::atomic<std::uint64_t> session_counter_{0};
  std::thread acceptor_;
  std::mutex conn_mutex_;
  std::vector<std::thread> conn_threads_;
  std::vector<int> conn_fds_;
};

}  // namespace gamepot::net

#endif  // GAMEPOT_NET_HPP_
