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

#include "gamepot/net.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <json.hpp>

#include "gamepot/errors.hpp"
#include "gamepot/policy.hpp"
#include "gamepot/rng.hpp"

namespace gamepot::net {

// ---------------------------------------------------------------------------
// CredentialStore
// ---------------------------------------------------------------------------

void CredentialStore::add(const std::string& username,
                          const std::string& password,
                          const std::string& home) {
  if (username.empty()) throw DomainError("credential username is empty");
  if (password.empty()) {
    throw DomainError("credential password for '" + username + "' is empty");
  }
  if (find(username) != nullptr) {
    throw DomainError("duplicate credential username '" + username + "'");
  }
  creds_.push_back({username, password, home});
}

bool CredentialStore::check(const std::string& username,
                            const std::string& password) const {
  const Credential* c = find(username);
  return c != nullptr && c->password == password;
}

const Credential* CredentialStore::find(const std::string& username) const {
  for (const Credential& c : creds_) {
    if (c.username == username) return &c;
  }
  return nullptr;
}

CredentialStore CredentialStore::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("credentials: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("credentials") ||
      !doc["credentials"].is_array()) {
    throw ConfigError("credentials: expected {\"credentials\": [...]}");
  }
  CredentialStore store;
  try {
    for (const nlohmann::json& item : doc["credentials"]) {
      store.add(item.at("username").get<std::string>(),
                item.at("password").get<std::string>(),
                item.value("home", std::string()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("credentials: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("credentials: ") + e.what());
  }
  return store;
}

CredentialStore CredentialStore::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read credentials file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

CredentialStore CredentialStore::defaults() {
  CredentialStore store;
  // Strong by construction; rotate via a credentials file in deployments.
  store.add("root", "kV9#mQ2xR!7wLp4z", "/root");
  store.add("anna", "T3$nB8vY!qJ6hF2d", "/home/anna");
  store.add("bruno", "W7&cZ4sK!mD9gX1p", "/home/bruno");
  return store;
}

// ---------------------------------------------------------------------------
// BanState
// ---------------------------------------------------------------------------

BanState::BanState(BanConfig config) : config_(config) {
  if (config_.max_failures < 1 || config_.window_seconds < 1 ||
      config_.ban_seconds < 1) {
    throw ConfigError("ban parameters must be positive");
  }
}

void BanState::record_failure(const std::string& ip, TimeMs now) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<TimeMs>& window = failures_[ip];
  const TimeMs horizon = now - static_cast<TimeMs>(config_.window_seconds) * 1000;
  window.push_back(now);
  window.erase(std::remove_if(window.begin(), window.end(),
                              [&](TimeMs t) { return t <= horizon; }),
               window.end());
  if (static_cast<int>(window.size()) >= config_.max_failures) {
    const TimeMs until = now + static_cast<TimeMs>(config_.ban_seconds) * 1000;
    TimeMs& slot = bans_[ip];
    slot = std::max(slot, until);
  }
}

TimeMs BanState::banned_until(const std::string& ip, TimeMs now) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = bans_.find(ip);
  if (it == bans_.end() || it->second <= now) return 0;
  return it->second;
}

RateLimitDecision rate_limit_check(const BanState& state,
                                   const std::string& ip, TimeMs now) {
  RateLimitDecision d;
  d.banned_until = state.banned_until(ip, now);
  d.allowed = d.banned_until == 0;
  return d;
}

// ---------------------------------------------------------------------------
// authenticate
// ---------------------------------------------------------------------------

bool authenticate(const CredentialStore& store, BanState& bans,
                  const std::string& username, const std::string& password,
                  const std::string& source_ip, TimeMs now,
                  logging::Writer* log, const std::string& session_id,
                  const std::string& instance) {
  const bool ok = store.check(username, password);
  if (!ok) bans.record_failure(source_ip, now);
  if (log != nullptr) {
    logging::Event ev = logging::Event::make(
        ok ? logging::kEvLoginSuccess : logging::kEvLoginFailed, now,
        session_id);
    ev.body["username"] = username;
    ev.body["src_ip"] = source_ip;
    ev.body["instance"] = instance;
    log->write(ev);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Service
// ---------------------------------------------------------------------------

namespace {

void send_all(int fd, const std::string& text) {
  std::size_t sent = 0;
  while (sent < text.size()) {
    const ssize_t n = ::send(fd, text.data() + sent, text.size() - sent,
                             MSG_NOSIGNAL);
    if (n <= 0) return;  // peer went away; the read side will notice
    sent += static_cast<std::size_t>(n);
  }
}

enum class Read { line, timeout, gone };

// Reads one '\n'-terminated line (CR stripped) within timeout_ms.
Read read_line(int fd, std::string& buffer, std::string& line,
               int timeout_ms) {
  for (;;) {
    const std::size_t nl = buffer.find('\n');
    if (nl != std::string::npos) {
      line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return Read::line;
    }
    pollfd pfd{fd, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc == 0) return Read::timeout;
    if (rc < 0) return Read::gone;
    char chunk[1024];
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) return Read::gone;
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace

Service::Service(ServeConfig config, CredentialStore credentials, Clock& clock)
    : config_(std::move(config)),
      credentials_(std::move(credentials)),
      clock_(clock),
      bans_(config_.ban),
      base_fs_(shell::build_default_fs()),
      captures_(config_.capture_dir) {
  if (config_.transport == "ssh") {
    throw ConfigError(
        "not built with SSH support; use the tcp transport or front the "
        "service with a real sshd");
  }
  if (config_.transport != "tcp") {
    throw ConfigError("unknown transport '" + config_.transport + "'");
  }
  if (credentials_.size() == 0) {
    throw ConfigError("credential store is empty");
  }
  if (config_.max_login_attempts < 1) {
    throw ConfigError("max_login_attempts must be positive");
  }
  // Fail fast on a bad policy instead of at first connection.
  if (!config_.policy_config_json.empty()) {
    policy::make_policy_from_config(config_.policy_config_json, 1);
  } else {
    policy::make_policy(config_.policy_name, 1);
  }
  if (!config_.log_path.empty()) {
    writer_ = std::make_unique<logging::Writer>(
        logging::Writer::Options{config_.log_path});
  }
  if (config_.live_fetch) {
    fetcher_ = std::make_unique<shell::HttpFetcher>();
  } else {
    fetcher_ = std::make_unique<shell::StubFetcher>();
  }
  config_.shell.instance = config_.instance;
}

Service::~Service() { stop(); }

void Service::start() {
  if (running_.load()) return;
  {
    std::lock_guard<std::mutex> lock(conn_mutex_);
    conn_threads_.clear();  // joined by the previous stop()
    conn_fds_.clear();
  }
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(config_.port));
  if (::inet_pton(AF_INET, config_.bind_address.c_str(), &addr.sin_addr) !=
      1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw ConfigError("bad bind address '" + config_.bind_address + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) !=
      0) {
    const int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error(std::string("bind failed: ") +
                             std::strerror(err));
  }
  if (::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("listen failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);

  running_.store(true);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Service::stop() {
  if (!running_.exchange(false)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(conn_threads_);
  }
  for (std::thread& t : workers) {
    if (t.joinable()) t.join();
  }
  if (writer_) writer_->flush();
}

std::string Service::next_session_id() {
  const std::uint64_t n = ++session_counter_;
  std::mt19937_64 rng(mix_seed(config_.seed, n));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%04llu-%08llx",
                static_cast<unsigned long long>(n),
                static_cast<unsigned long long>(rng() & 0xffffffffu));
  return buf;
}

void Service::accept_loop() {
  while (running_.load()) {
    sockaddr_in peer{};
    socklen_t len = sizeof(peer);
    const int fd =
        ::accept(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len);
    if (fd < 0) {
      if (!running_.load()) break;
      continue;
    }
    char ip[INET_ADDRSTRLEN] = "0.0.0.0";
    ::inet_ntop(AF_INET, &peer.sin_addr, ip, sizeof(ip));
    std::lock_guard<std::mutex> lock(conn_mutex_);
    if (!running_.load()) {
      ::close(fd);
      break;
    }
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back(
        [this, fd, peer_ip = std::string(ip)] { handle_connection(fd, peer_ip); });
  }
}

void Service::handle_connection(int fd, const std::string& peer_ip) {
  // Banned sources are dropped silently: no banner, no events.
  if (!rate_limit_check(bans_, peer_ip, clock_.now_ms()).allowed) {
    ::close(fd);
    return;
  }

  const std::string sid = next_session_id();
  const TimeMs opened = clock_.now_ms();
  if (writer_) {
    logging::Event ev = logging::Event::make(logging::kEvConnect, opened, sid);
    ev.body["src_ip"] = peer_ip;
    ev.body["instance"] = config_.instance;
    ev.body["transport"] = config_.transport;
    writer_->write(ev);
  }

  std::string buffer;
  std::string user;
  bool authed = false;
  for (int attempt = 0; attempt < config_.max_login_attempts && !authed;
       ++attempt) {
    send_all(fd, config_.shell.hostname + " login: ");
    std::string u;
    std::string p;
    if (read_line(fd, buffer, u, 60 * 1000) != Read::line) break;
    send_all(fd, "Password: ");
    if (read_line(fd, buffer, p, 60 * 1000) != Read::line) break;
    authed = authenticate(credentials_, bans_, u, p, peer_ip, clock_.now_ms(),
                          writer_.get(), sid, config_.instance);
    if (authed) {
      user = u;
    } else {
      send_all(fd, "Login incorrect\n");
    }
  }

  if (!authed) {
    if (writer_) {
      logging::Event ev =
          logging::Event::make(logging::kEvClosed, clock_.now_ms(), sid);
      ev.body["reason"] = "auth-failed";
      ev.body["duration"] =
          static_cast<double>(clock_.now_ms() - opened) / 1000.0;
      ev.body["commands"] = 0;
      ev.body["instance"] = config_.instance;
      writer_->write(ev);
    }
    ::close(fd);
    return;
  }

  sessions_started_.fetch_add(1);
  shell::ShellConfig scfg = config_.shell;
  scfg.username = user;
  std::unique_ptr<policy::Policy> pol =
      config_.policy_config_json.empty()
          ? policy::make_policy(config_.policy_name,
                                mix_seed(config_.seed, session_counter_.load()))
          : policy::make_policy_from_config(
                config_.policy_config_json,
                mix_seed(config_.seed, session_counter_.load()));
  shell::ShellSession session(sid, peer_ip, std::move(pol), clock_,
                              writer_.get(), base_fs_, scfg, fetcher_.get(),
                              &captures_);

  send_all(fd, "Welcome to Ubuntu 22.04.3 LTS (GNU/Linux 5.15.0-78-generic "
               "x86_64)\n\n");
  send_all(fd, session.prompt());

  while (!session.is_closed()) {
    // Short poll slices so idle and cap limits fire without input.
    std::string line;
    const Read got = read_line(fd, buffer, line, 250);
    if (got == Read::gone) {
      session.close("disconnect");
      break;
    }
    if (got == Read::timeout) {
      const TimeMs now = clock_.now_ms();
      if (!running_.load()) {
        session.close("shutdown");
        break;
      }
      if (now - session.started_ms() >=
          static_cast<TimeMs>(scfg.hard_cap_seconds) * 1000) {
        session.close("session-cap");
        break;
      }
      if (now - session.last_activity_ms() >=
          static_cast<TimeMs>(scfg.idle_timeout_seconds) * 1000) {
        session.close("idle-timeout");
        break;
      }
      continue;
    }
    const std::string out = session.handle_line(line);
    if (!out.empty()) send_all(fd, out);
    if (!session.is_closed()) send_all(fd, session.prompt());
  }
  ::close(fd);
  std::lock_guard<std::mutex> lock(conn_mutex_);
  conn_fds_.erase(std::remove(conn_fds_.begin(), conn_fds_.end(), fd),
                  conn_fds_.end());
}

}  // namespace gamepot::net
