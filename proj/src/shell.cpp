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

#include "gamepot/shell.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "gamepot/errors.hpp"

namespace gamepot::shell {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on ';' and '&&' outside quotes. A trailing lone '&' is dropped.
std::vector<std::string> split_segments(const std::string& line) {
  std::vector<std::string> parts;
  std::string cur;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      cur += c;
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      cur += c;
      continue;
    }
    if (c == ';') {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    if (c == '&' && i + 1 < line.size() && line[i + 1] == '&') {
      parts.push_back(cur);
      cur.clear();
      ++i;
      continue;
    }
    if (c == '&' && i + 1 == line.size()) continue;
    cur += c;
  }
  parts.push_back(cur);
  return parts;
}

// Whitespace tokenizer with quote handling. '>' '>>' '|' become their own
// tokens even when written without spaces.
std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  bool have = false;
  char quote = 0;
  auto flush = [&] {
    if (have) out.push_back(cur);
    cur.clear();
    have = false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      have = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (c == '|') {
      flush();
      out.emplace_back("|");
      continue;
    }
    if (c == '>') {
      flush();
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.emplace_back(">>");
        ++i;
      } else {
        out.emplace_back(">");
      }
      continue;
    }
    cur += c;
    have = true;
  }
  flush();
  return out;
}

std::string join(const std::vector<std::string>& v, std::size_t from,
                 const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = from; i < v.size(); ++i) {
    if (i > from) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::string leaf_of(const std::string& path) {
  const std::size_t pos = path.find_last_of('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

std::string parent_of(const std::string& abs) {
  const std::size_t pos = abs.find_last_of('/');
  if (pos == 0) return "/";
  return abs.substr(0, pos);
}

std::string stem_of_archive(const std::string& name) {
  for (const char* suffix : {".tar.gz", ".tar.bz2", ".tar.xz", ".tgz",
                             ".tar", ".zip", ".gz"}) {
    const std::size_t n = std::strlen(suffix);
    if (name.size() > n && name.compare(name.size() - n, n, suffix) == 0) {
      return name.substr(0, name.size() - n);
    }
  }
  return name + ".extracted";
}

std::string url_host(const std::string& url) {
  std::string rest = url;
  const std::size_t scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  const std::size_t slash = rest.find('/');
  if (slash != std::string::npos) rest = rest.substr(0, slash);
  const std::size_t colon = rest.find(':');
  if (colon != std::string::npos) rest = rest.substr(0, colon);
  return rest;
}

std::string url_leaf(const std::string& url) {
  std::string rest = url;
  const std::size_t scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  const std::size_t query = rest.find_first_of("?#");
  if (query != std::string::npos) rest = rest.substr(0, query);
  const std::string leaf = leaf_of(rest);
  if (leaf.empty() || rest.find('/') == std::string::npos) return "index.html";
  return leaf;
}

// Stable fake address for transcript texture.
std::string fake_ip_for(const std::string& host) {
  const std::size_t h = std::hash<std::string>{}(host);
  auto octet = [&](int shift) {
    return std::to_string(1 + static_cast<int>((h >> shift) & 0xff) % 253);
  };
  return octet(0) + "." + octet(8) + "." + octet(16) + "." + octet(24);
}

struct TmParts {
  std::tm tm{};
  int millis = 0;
};

TmParts utc_parts(TimeMs ms) {
  TmParts p;
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  gmtime_r(&secs, &p.tm);
  p.millis = static_cast<int>(ms % 1000);
  return p;
}

std::string strf(TimeMs ms, const char* fmt) {
  const TmParts p = utc_parts(ms);
  char buf[96];
  std::strftime(buf, sizeof(buf), fmt, &p.tm);
  return buf;
}

}  // namespace

ShellSession::ShellSession(std::string session_id, std::string src_ip,
                           std::unique_ptr<policy::Policy> policy,
                           Clock& clock, logging::Writer* log, FakeFs fs,
                           ShellConfig config, Fetcher* fetcher,
                           CaptureStore* captures)
    : session_id_(std::move(session_id)),
      src_ip_(std::move(src_ip)),
      policy_(std::move(policy)),
      clock_(clock),
      log_(log),
      fs_(std::move(fs)),
      config_(std::move(config)),
      fetcher_(fetcher),
      captures_(captures) {
  if (!policy_) throw ConfigError("shell session needs a policy");
  if (config_.hard_cap_seconds <= 0 || config_.idle_timeout_seconds <= 0) {
    throw ConfigError("session timeouts must be positive");
  }
  if (!fetcher_) {
    default_fetcher_ = std::make_unique<StubFetcher>();
    fetcher_ = default_fetcher_.get();
  }
  if (!captures_) {
    default_captures_ = std::make_unique<CaptureStore>();
    captures_ = default_captures_.get();
  }
  home_ = config_.username == "root" ? "/root" : "/home/" + config_.username;
  if (!fs_.is_dir(home_)) home_ = "/";
  cwd_ = home_;
  started_ms_ = clock_.now_ms();
  last_activity_ms_ = started_ms_;
}

std::string ShellSession::prompt() const {
  std::string shown = cwd_;
  if (shown == home_) {
    shown = "~";
  } else if (shown.rfind(home_ + "/", 0) == 0) {
    shown = "~" + shown.substr(home_.size());
  }
  const char mark = config_.username == "root" ? '#' : '$';
  return config_.username + "@" + config_.hostname + ":" + shown + mark + " ";
}

void ShellSession::log_event(logging::Event event) {
  event.body["instance"] = config_.instance;
  if (log_) log_->write(event);
}

bool ShellSession::may_modify(const std::string& abs) const {
  if (config_.username == "root") return true;
  if (abs == "/tmp" || abs.rfind("/tmp/", 0) == 0) return true;
  // Nearest existing node decides: its owner, or the owner of the directory
  // the new entry would land in.
  std::string walk = abs;
  const FakeFs::Node* node = fs_.find(walk);
  while (node == nullptr && walk != "/") {
    walk = parent_of(walk);
    node = fs_.find(walk);
  }
  return node != nullptr && node->owner == config_.username;
}

void ShellSession::log_policy(const policy::PolicyDecision& decision,
                              const std::string& command) {
  logging::Event ev = logging::Event::make(logging::kEvPolicyAction,
                                           clock_.now_ms(), session_id_);
  ev.body["action"] = game::to_string(decision.action);
  ev.body["command"] = command;
  if (decision.action != game::DefenderAction::allow) {
    ev.body["message"] = decision.message;
  }
  log_event(std::move(ev));
}

std::string ShellSession::handle_line(const std::string& line) {
  if (closed_) {
    throw SessionStateError("session " + session_id_ + " is closed");
  }
  const TimeMs now = clock_.now_ms();
  if (now - started_ms_ >=
      static_cast<TimeMs>(config_.hard_cap_seconds) * 1000) {
    close("session-cap");
    return "";
  }
  if (now - last_activity_ms_ >=
      static_cast<TimeMs>(config_.idle_timeout_seconds) * 1000) {
    close("idle-timeout");
    return "";
  }
  last_activity_ms_ = now;

  const std::string input = trim(line);
  if (input.empty()) {
    // Bare returns show up in logs (attackers mash the key) but are not
    // commands.
    logging::Event key =
        logging::Event::make(logging::kEvKeystroke, now, session_id_);
    key.body["key"] = "\n";
    log_event(std::move(key));
    return "";
  }
  ++command_count_;
  history_.push_back(input);

  if (config_.log_keystrokes) {
    for (char c : line) {
      logging::Event key =
          logging::Event::make(logging::kEvKeystroke, now, session_id_);
      key.body["key"] = std::string(1, c);
      log_event(std::move(key));
    }
  }
  logging::Event in =
      logging::Event::make(logging::kEvCommandInput, now, session_id_);
  in.body["input"] = input;
  log_event(std::move(in));

  std::string out;
  for (const std::string& raw : split_segments(input)) {
    const std::string segment = trim(raw);
    if (segment.empty()) continue;
    Exec exec = run_segment(segment);
    out += exec.out;
    if (exec.session_ended) break;
  }
  return out;
}

ShellSession::Exec ShellSession::run_segment(const std::string& segment) {
  std::vector<std::string> argv = tokenize(segment);
  if (argv.empty()) return {};
  const std::string cmd = argv[0];

  // Leaving is always allowed; gating it would only reveal the game.
  if (cmd == "exit" || cmd == "logout") {
    close("exit");
    return {"logout\n", true};
  }

  const policy::PolicyDecision decision = policy_->decide(segment);
  log_policy(decision, segment);
  switch (decision.action) {
    case game::DefenderAction::block:
      return {"bash: " + cmd + ": " + decision.message + "\n", false};
    case game::DefenderAction::insult:
      return {decision.message + "\n", false};
    case game::DefenderAction::allow:
      break;
  }
  return {emulate(std::move(argv)), false};
}

std::string ShellSession::emulate(std::vector<std::string> argv) {
  // Pipeline stages.
  std::vector<std::vector<std::string>> stages(1);
  for (std::string& tok : argv) {
    if (tok == "|") {
      stages.emplace_back();
    } else {
      stages.back().push_back(std::move(tok));
    }
  }
  // Output redirection on the final stage.
  std::string redirect_to;
  bool redirect_append = false;
  {
    std::vector<std::string>& last = stages.back();
    for (std::size_t i = 0; i < last.size(); ++i) {
      if (last[i] == ">" || last[i] == ">>") {
        redirect_append = last[i] == ">>";
        if (i + 1 < last.size()) redirect_to = last[i + 1];
        last.resize(i);
        break;
      }
    }
  }

  std::string text;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].empty()) continue;
    text = run_simple(stages[i], i == 0 ? std::string() : text);
  }

  if (!redirect_to.empty()) {
    const std::string abs = FakeFs::normalize(redirect_to, cwd_);
    if (fs_.is_dir(abs)) {
      return "bash: " + redirect_to + ": Is a directory\n";
    }
    if (!fs_.is_dir(parent_of(abs))) {
      return "bash: " + redirect_to + ": No such file or directory\n";
    }
    if (!may_modify(abs)) {
      return "bash: " + redirect_to + ": Permission denied\n";
    }
    fs_.write_file(abs, text, config_.username, redirect_append);
    return "";
  }
  return text;
}

std::string ShellSession::do_download(const std::string& tool,
                                      const std::string& url,
                                      const std::string& save_as,
                                      bool to_stdout) {
  const std::string host = url_host(url);
  const Fetcher::Result got = fetcher_->fetch(url);
  if (!got.ok) {
    if (tool == "curl") {
      return "curl: (6) Could not resolve host: " + host + "\n";
    }
    return "--" + strf(clock_.now_ms(), "%Y-%m-%d %H:%M:%S") + "--  " + url +
           "\nResolving " + host + " (" + host + ")... failed: " + got.error +
           ".\nwget: unable to resolve host address '" + host + "'\n";
  }

  const CaptureStore::Entry entry = captures_->store(url, got.content);
  logging::Event ev =
      logging::Event::make(logging::kEvDownload, clock_.now_ms(), session_id_);
  ev.body["url"] = url;
  ev.body["sha256"] = entry.sha256;
  ev.body["size"] = entry.size;
  ev.body["new"] = entry.new_capture;
  log_event(std::move(ev));

  if (to_stdout) return got.content;

  std::string name = save_as.empty() ? url_leaf(url) : save_as;
  std::string abs = FakeFs::normalize(name, cwd_);
  if (fs_.is_dir(abs)) abs = FakeFs::normalize(name + "/index.html", cwd_);
  if (!fs_.is_dir(parent_of(abs))) {
    return (tool == "curl" ? "curl: (23) Failure writing output to destination\n"
                           : "wget: " + name + ": No such file or directory\n");
  }
  if (!may_modify(abs)) {
    return (tool == "curl" ? "curl: (23) Failure writing output to destination\n"
                           : name + ": Permission denied\n");
  }
  fs_.write_file(abs, got.content, config_.username);

  if (tool == "curl") {
    std::ostringstream os;
    os << "  % Total    % Received % Xferd  Average Speed   Time    Time     "
          "Time  Current\n"
       << "                                 Dload  Upload   Total   Spent    "
          "Left  Speed\n"
       << "100  " << entry.size << "  100  " << entry.size
       << "    0     0   51200      0 --:--:-- --:--:-- --:--:-- 51200\n";
    return os.str();
  }
  const std::string size = std::to_string(entry.size);
  std::ostringstream os;
  os << "--" << strf(clock_.now_ms(), "%Y-%m-%d %H:%M:%S") << "--  " << url
     << "\n"
     << "Resolving " << host << " (" << host << ")... " << fake_ip_for(host)
     << "\n"
     << "Connecting to " << host << " (" << host << ")|" << fake_ip_for(host)
     << "|:80... connected.\n"
     << "HTTP request sent, awaiting response... 200 OK\n"
     << "Length: " << size << " [application/octet-stream]\n"
     << "Saving to: '" << leaf_of(abs) << "'\n\n"
     << "'" << leaf_of(abs) << "' saved [" << size << "/" << size << "]\n";
  return os.str();
}

std::string ShellSession::run_simple(const std::vector<std::string>& argv,
                                     const std::string& stdin_text) {
  const std::string& cmd = argv[0];
  auto resolve = [&](const std::string& p) {
    if (p == "~") return home_;
    if (p.rfind("~/", 0) == 0) return FakeFs::normalize(home_ + p.substr(1), cwd_);
    return FakeFs::normalize(p, cwd_);
  };

  if (cmd == "cd") {
    std::string target = argv.size() > 1 ? argv[1] : "~";
    if (target.empty()) target = "~";
    const std::string abs = resolve(target);
    if (!fs_.exists(abs)) {
      return "bash: cd: " + argv[1] + ": No such file or directory\n";
    }
    if (!fs_.is_dir(abs)) {
      return "bash: cd: " + argv[1] + ": Not a directory\n";
    }
    cwd_ = abs;
    return "";
  }

  if (cmd == "pwd") return cwd_ + "\n";
  if (cmd == "whoami") return config_.username + "\n";
  if (cmd == "hostname") return config_.hostname + "\n";

  if (cmd == "id") {
    if (config_.username == "root") {
      return "uid=0(root) gid=0(root) groups=0(root)\n";
    }
    return "uid=1000(" + config_.username + ") gid=1000(" + config_.username +
           ") groups=1000(" + config_.username + "),27(sudo)\n";
  }

  if (cmd == "uname") {
    const bool all =
        argv.size() > 1 && (argv[1] == "-a" || argv[1] == "--all");
    if (all) {
      return "Linux " + config_.hostname +
             " 5.15.0-78-generic #85-Ubuntu SMP Fri Jul 7 15:25:09 UTC 2023 "
             "x86_64 x86_64 x86_64 GNU/Linux\n";
    }
    if (argv.size() > 1 && argv[1] == "-r") return "5.15.0-78-generic\n";
    return "Linux\n";
  }

  if (cmd == "echo") {
    std::size_t from = 1;
    bool newline = true;
    if (argv.size() > 1 && argv[1] == "-n") {
      newline = false;
      from = 2;
    }
    return join(argv, from) + (newline ? "\n" : "");
  }

  if (cmd == "cat") {
    if (argv.size() == 1) return stdin_text;
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      const std::string abs = resolve(argv[i]);
      if (!fs_.exists(abs)) {
        out += "cat: " + argv[i] + ": No such file or directory\n";
      } else if (fs_.is_dir(abs)) {
        out += "cat: " + argv[i] + ": Is a directory\n";
      } else {
        out += fs_.read(abs);
        if (!out.empty() && out.back() != '\n') out += "\n";
      }
    }
    return out;
  }

  if (cmd == "ls") {
    bool longfmt = false;
    bool all = false;
    std::vector<std::string> operands;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-') {
        longfmt = longfmt || argv[i].find('l') != std::string::npos;
        all = all || argv[i].find('a') != std::string::npos;
      } else {
        operands.push_back(argv[i]);
      }
    }
    if (operands.empty()) operands.push_back(".");
    std::string out;
    for (const std::string& op : operands) {
      const std::string abs = resolve(op);
      const FakeFs::Node* node = fs_.find(abs);
      if (node == nullptr) {
        out += "ls: cannot access '" + op + "': No such file or directory\n";
        continue;
      }
      if (!node->is_dir) {
        out += op + "\n";
        continue;
      }
      std::vector<std::string> names = fs_.list(abs);
      if (!all) {
        std::vector<std::string> kept;
        for (const std::string& n : names) {
          if (!n.empty() && n[0] != '.') kept.push_back(n);
        }
        names = std::move(kept);
      } else {
        names.insert(names.begin(), {".", ".."});
      }
      if (!longfmt) {
        if (!names.empty()) out += join(names, 0, "  ") + "\n";
        continue;
      }
      out += "total " + std::to_string(names.size()) + "\n";
      for (const std::string& n : names) {
        const FakeFs::Node* child =
            (n == "." || n == "..") ? node : fs_.find(abs + "/" + n);
        if (child == nullptr) continue;
        const std::size_t size = child->is_dir ? 4096 : child->content.size();
        char line[256];
        std::snprintf(line, sizeof(line), "%s %d %s %s %6zu Aug 12 06:25 %s\n",
                      child->mode.c_str(), child->is_dir ? 2 : 1,
                      child->owner.c_str(), child->group.c_str(), size,
                      n.c_str());
        out += line;
      }
    }
    return out;
  }

  if (cmd == "mkdir") {
    bool parents = false;
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (argv[i] == "-p") {
        parents = true;
        continue;
      }
      const std::string abs = resolve(argv[i]);
      if (fs_.exists(abs)) {
        if (!parents) {
          out += "mkdir: cannot create directory '" + argv[i] +
                 "': File exists\n";
        }
        continue;
      }
      if (!may_modify(abs)) {
        out += "mkdir: cannot create directory '" + argv[i] +
               "': Permission denied\n";
        continue;
      }
      if (parents) {
        std::string walk;
        std::istringstream parts(abs.substr(1));
        std::string piece;
        while (std::getline(parts, piece, '/')) {
          walk += "/" + piece;
          if (!fs_.exists(walk)) fs_.mkdir(walk, config_.username);
        }
      } else if (fs_.is_dir(parent_of(abs))) {
        fs_.mkdir(abs, config_.username);
      } else {
        out += "mkdir: cannot create directory '" + argv[i] +
               "': No such file or directory\n";
      }
    }
    return out;
  }

  if (cmd == "touch") {
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      const std::string abs = resolve(argv[i]);
      if (fs_.exists(abs)) continue;
      if (!fs_.is_dir(parent_of(abs))) {
        out += "touch: cannot touch '" + argv[i] +
               "': No such file or directory\n";
        continue;
      }
      if (!may_modify(abs)) {
        out += "touch: cannot touch '" + argv[i] + "': Permission denied\n";
        continue;
      }
      fs_.write_file(abs, "", config_.username);
    }
    return out;
  }

  if (cmd == "rm") {
    bool recursive = false;
    bool force = false;
    std::string out;
    std::vector<std::string> operands;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-') {
        recursive = recursive || argv[i].find('r') != std::string::npos ||
                    argv[i].find('R') != std::string::npos;
        force = force || argv[i].find('f') != std::string::npos;
      } else {
        operands.push_back(argv[i]);
      }
    }
    for (const std::string& op : operands) {
      const std::string abs = resolve(op);
      if (!fs_.exists(abs)) {
        if (!force) {
          out += "rm: cannot remove '" + op + "': No such file or directory\n";
        }
        continue;
      }
      if (fs_.is_dir(abs) && !recursive) {
        out += "rm: cannot remove '" + op + "': Is a directory\n";
        continue;
      }
      if (!may_modify(abs)) {
        out += "rm: cannot remove '" + op + "': Permission denied\n";
        continue;
      }
      fs_.remove(abs, recursive);
    }
    return out;
  }

  if (cmd == "cp" || cmd == "mv") {
    if (argv.size() < 3) {
      return cmd + ": missing file operand\n";
    }
    const std::string src = resolve(argv[1]);
    if (!fs_.exists(src) || fs_.is_dir(src)) {
      return cmd + ": cannot stat '" + argv[1] +
             "': No such file or directory\n";
    }
    std::string dst = resolve(argv[2]);
    if (fs_.is_dir(dst)) dst += "/" + leaf_of(src);
    if (!fs_.is_dir(parent_of(dst))) {
      return cmd + ": cannot create regular file '" + argv[2] +
             "': No such file or directory\n";
    }
    if (!may_modify(dst) || (cmd == "mv" && !may_modify(src))) {
      return cmd + ": cannot create regular file '" + argv[2] +
             "': Permission denied\n";
    }
    fs_.write_file(dst, fs_.read(src), config_.username);
    if (cmd == "mv") fs_.remove(src, false);
    return "";
  }

  if (cmd == "chmod" || cmd == "chown") {
    std::string out;
    for (std::size_t i = 2; i < argv.size(); ++i) {
      if (!argv[i].empty() && argv[i][0] == '-') continue;
      if (!fs_.exists(resolve(argv[i]))) {
        out += cmd + ": cannot access '" + argv[i] +
               "': No such file or directory\n";
      }
    }
    return out;
  }

  if (cmd == "grep") {
    std::size_t i = 1;
    bool icase = false;
    for (; i < argv.size() && !argv[i].empty() && argv[i][0] == '-'; ++i) {
      icase = icase || argv[i].find('i') != std::string::npos;
    }
    if (i >= argv.size()) return "Usage: grep [OPTION]... PATTERNS [FILE]...\n";
    std::string pattern = argv[i++];
    auto lower = [](std::string s) {
      for (char& c : s) c = static_cast<char>(std::tolower(c));
      return s;
    };
    if (icase) pattern = lower(pattern);
    auto match = [&](const std::string& line) {
      return (icase ? lower(line) : line).find(pattern) != std::string::npos;
    };
    std::string out;
    if (i >= argv.size()) {
      for (const std::string& line : split_lines(stdin_text)) {
        if (match(line)) out += line + "\n";
      }
      return out;
    }
    const bool many = argv.size() - i > 1;
    for (; i < argv.size(); ++i) {
      const std::string abs = resolve(argv[i]);
      if (!fs_.exists(abs) || fs_.is_dir(abs)) {
        out += "grep: " + argv[i] + ": No such file or directory\n";
        continue;
      }
      for (const std::string& line : split_lines(fs_.read(abs))) {
        if (match(line)) out += (many ? argv[i] + ":" : "") + line + "\n";
      }
    }
    return out;
  }

  if (cmd == "head" || cmd == "tail") {
    long n = 10;
    std::size_t i = 1;
    for (; i < argv.size() && !argv[i].empty() && argv[i][0] == '-'; ++i) {
      if (argv[i] == "-n" && i + 1 < argv.size()) {
        n = std::strtol(argv[++i].c_str(), nullptr, 10);
      } else if (argv[i].size() > 1 &&
                 std::isdigit(static_cast<unsigned char>(argv[i][1]))) {
        n = std::strtol(argv[i].c_str() + 1, nullptr, 10);
      }
    }
    std::string text = stdin_text;
    if (i < argv.size()) {
      const std::string abs = resolve(argv[i]);
      if (!fs_.exists(abs)) {
        return cmd + ": cannot open '" + argv[i] +
               "' for reading: No such file or directory\n";
      }
      text = fs_.read(abs);
    }
    std::vector<std::string> lines = split_lines(text);
    if (n < 0) n = 0;
    const std::size_t count =
        std::min(lines.size(), static_cast<std::size_t>(n));
    std::string out;
    if (cmd == "head") {
      for (std::size_t k = 0; k < count; ++k) out += lines[k] + "\n";
    } else {
      for (std::size_t k = lines.size() - count; k < lines.size(); ++k) {
        out += lines[k] + "\n";
      }
    }
    return out;
  }

  if (cmd == "wc") {
    std::string text = stdin_text;
    std::string name;
    bool lines_only = false;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (argv[i] == "-l") {
        lines_only = true;
      } else if (!argv[i].empty() && argv[i][0] != '-') {
        const std::string abs = resolve(argv[i]);
        if (!fs_.exists(abs)) {
          return "wc: " + argv[i] + ": No such file or directory\n";
        }
        text = fs_.read(abs);
        name = " " + argv[i];
      }
    }
    std::size_t nl = 0;
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
      if (c == '\n') ++nl;
      if (std::isspace(static_cast<unsigned char>(c))) {
        in_word = false;
      } else if (!in_word) {
        in_word = true;
        ++words;
      }
    }
    if (lines_only) return std::to_string(nl) + name + "\n";
    return std::to_string(nl) + " " + std::to_string(words) + " " +
           std::to_string(text.size()) + name + "\n";
  }

  if (cmd == "find") {
    // Plain recursive listing; predicates are accepted and ignored.
    const std::string start = argv.size() > 1 && argv[1][0] != '-'
                                  ? resolve(argv[1])
                                  : cwd_;
    if (!fs_.exists(start)) {
      return "find: '" + (argv.size() > 1 ? argv[1] : ".") +
             "': No such file or directory\n";
    }
    std::string out;
    std::function<void(const std::string&)> walk =
        [&](const std::string& path) {
          out += path + "\n";
          if (!fs_.is_dir(path)) return;
          for (const std::string& n : fs_.list(path)) {
            walk(path == "/" ? "/" + n : path + "/" + n);
          }
        };
    walk(start);
    return out;
  }

  if (cmd == "history") {
    std::string out;
    for (std::size_t i = 0; i < history_.size(); ++i) {
      char num[16];
      std::snprintf(num, sizeof(num), "%5zu  ", i + 1);
      out += std::string(num) + history_[i] + "\n";
    }
    return out;
  }

  if (cmd == "which") {
    static const std::set<std::string> in_path = {
        "apt",   "apt-get", "cat",  "chmod", "chown",   "cp",     "curl",
        "df",    "echo",    "env",  "find",  "free",    "grep",   "head",
        "id",    "ifconfig", "ip",  "ls",    "mkdir",   "mv",     "netstat",
        "ps",    "pwd",     "rm",   "scp",   "ssh",     "sudo",   "tail",
        "touch", "uname",   "uptime", "w",   "wc",      "wget",   "whoami"};
    std::string out;
    for (std::size_t i = 1; i < argv.size(); ++i) {
      if (in_path.count(argv[i]) > 0) out += "/usr/bin/" + argv[i] + "\n";
    }
    return out;
  }

  if (cmd == "env" || cmd == "printenv") {
    return "SHELL=/bin/bash\nPWD=" + cwd_ + "\nLOGNAME=" + config_.username +
           "\nHOME=" + home_ + "\nLANG=C.UTF-8\nUSER=" + config_.username +
           "\nPATH=/usr/local/sbin:/usr/local/bin:/usr/sbin:/usr/bin:/sbin:"
           "/bin\n";
  }

  if (cmd == "ps") {
    const bool wide = argv.size() > 1;
    if (!wide) {
      return "    PID TTY          TIME CMD\n"
             "   1337 pts/0    00:00:00 bash\n"
             "   1409 pts/0    00:00:00 ps\n";
    }
    return "USER         PID %CPU %MEM    VSZ   RSS TTY      STAT START   "
           "TIME COMMAND\n"
           "root           1  0.0  0.2 167312 11416 ?        Ss   Jul18   "
           "0:14 /sbin/init\n"
           "root         412  0.0  0.1  15424  6912 ?        Ss   Jul18   "
           "0:00 sshd: /usr/sbin/sshd -D [listener]\n"
           "root         438  0.0  0.0   8356  2816 ?        Ss   Jul18   "
           "0:00 /usr/sbin/cron -f -P\n"
           "mysql        521  0.1  9.8 1284956 394208 ?      Ssl  Jul18  "
           "14:02 /usr/sbin/mysqld\n"
           "www-data     633  0.0  0.3  58120 13120 ?        S    Jul18   "
           "0:21 nginx: worker process\n"
           "root        1337  0.0  0.1  10044  5248 pts/0    Ss   " +
           strf(clock_.now_ms(), "%H:%M") +
           "   0:00 -bash\n"
           "root        1409  0.0  0.0  12192  3328 pts/0    R+   " +
           strf(clock_.now_ms(), "%H:%M") + "   0:00 ps aux\n";
  }

  if (cmd == "ifconfig" || cmd == "ip") {
    if (cmd == "ip" && argv.size() > 1 && argv[1] != "a" && argv[1] != "addr") {
      return "Object \"" + argv[1] + "\" is unknown, try \"ip help\".\n";
    }
    if (cmd == "ip") {
      return "1: lo: <LOOPBACK,UP,LOWER_UP> mtu 65536 qdisc noqueue state "
             "UNKNOWN group default qlen 1000\n"
             "    inet 127.0.0.1/8 scope host lo\n"
             "2: eth0: <BROADCAST,MULTICAST,UP,LOWER_UP> mtu 1500 qdisc "
             "fq_codel state UP group default qlen 1000\n"
             "    link/ether 52:54:00:83:12:4d brd ff:ff:ff:ff:ff:ff\n"
             "    inet 10.0.2.15/24 brd 10.0.2.255 scope global eth0\n";
    }
    return "eth0: flags=4163<UP,BROADCAST,RUNNING,MULTICAST>  mtu 1500\n"
           "        inet 10.0.2.15  netmask 255.255.255.0  broadcast "
           "10.0.2.255\n"
           "        ether 52:54:00:83:12:4d  txqueuelen 1000  (Ethernet)\n"
           "        RX packets 21141  bytes 1967245 (1.9 MB)\n"
           "        TX packets 10236  bytes 1453108 (1.4 MB)\n"
           "\n"
           "lo: flags=73<UP,LOOPBACK,RUNNING>  mtu 65536\n"
           "        inet 127.0.0.1  netmask 255.0.0.0\n";
  }

  if (cmd == "netstat" || cmd == "ss") {
    return "Active Internet connections (only servers)\n"
           "Proto Recv-Q Send-Q Local Address           Foreign Address      "
           "   State\n"
           "tcp        0      0 0.0.0.0:22              0.0.0.0:*            "
           "   LISTEN\n"
           "tcp        0      0 0.0.0.0:80              0.0.0.0:*            "
           "   LISTEN\n"
           "tcp        0      0 127.0.0.1:3306          0.0.0.0:*            "
           "   LISTEN\n";
  }

  if (cmd == "uptime") {
    return " " + strf(clock_.now_ms(), "%H:%M:%S") +
           " up 26 days,  3:14,  1 user,  load average: 0.08, 0.03, 0.01\n";
  }

  if (cmd == "w" || cmd == "who" || cmd == "last") {
    const std::string when = strf(clock_.now_ms(), "%H:%M");
    if (cmd == "last") {
      return config_.username + "     pts/0        " + src_ip_ + "       " +
             strf(clock_.now_ms(), "%a %b %e %H:%M") +
             "   still logged in\n" +
             "reboot   system boot  5.15.0-78-generi Fri Jul 18 06:02   "
             "still running\n";
    }
    if (cmd == "who") {
      return config_.username + "     pts/0        " +
             strf(clock_.now_ms(), "%Y-%m-%d %H:%M") + " (" + src_ip_ + ")\n";
    }
    return " " + strf(clock_.now_ms(), "%H:%M:%S") +
           " up 26 days,  3:14,  1 user,  load average: 0.08, 0.03, 0.01\n"
           "USER     TTY      FROM             LOGIN@   IDLE   JCPU   PCPU "
           "WHAT\n" +
           config_.username + "     pts/0    " + src_ip_ + "  " + when +
           "    0.00s  0.04s  0.00s w\n";
  }

  if (cmd == "df") {
    return "Filesystem      Size  Used Avail Use% Mounted on\n"
           "/dev/vda1        40G   12G   26G  32% /\n"
           "tmpfs           2.0G     0  2.0G   0% /dev/shm\n"
           "tmpfs           393M  1.1M  392M   1% /run\n";
  }

  if (cmd == "free") {
    return "               total        used        free      shared  "
           "buff/cache   available\n"
           "Mem:            3931        1034        1507           2        "
           "1389        2628\n"
           "Swap:              0           0           0\n";
  }

  if (cmd == "date") {
    return strf(clock_.now_ms(), "%a %b %e %H:%M:%S UTC %Y") + "\n";
  }

  if (cmd == "sudo") {
    return config_.username +
           " is not in the sudoers file.  This incident will be reported.\n";
  }

  if (cmd == "su") {
    return "su: Authentication failure\n";
  }

  if (cmd == "apt" || cmd == "apt-get") {
    const std::string sub = argv.size() > 1 ? argv[1] : "";
    if (sub == "update") {
      return "Err:1 http://archive.ubuntu.com/ubuntu jammy InRelease\n"
             "  Temporary failure resolving 'archive.ubuntu.com'\n"
             "Reading package lists... Done\n"
             "W: Failed to fetch "
             "http://archive.ubuntu.com/ubuntu/dists/jammy/InRelease  "
             "Temporary failure resolving 'archive.ubuntu.com'\n"
             "W: Some index files failed to download. They have been "
             "ignored, or old ones used instead.\n";
    }
    if (sub == "install") {
      std::string out =
          "Reading package lists... Done\n"
          "Building dependency tree... Done\n"
          "Reading state information... Done\n";
      for (std::size_t i = 2; i < argv.size(); ++i) {
        if (!argv[i].empty() && argv[i][0] != '-') {
          out += "E: Unable to locate package " + argv[i] + "\n";
        }
      }
      return out;
    }
    return "apt " + sub + " is not understood in this context\n";
  }

  if (cmd == "yum" || cmd == "dnf") {
    return "Loaded plugins: fastestmirror\n"
           "Could not retrieve mirrorlist "
           "http://mirrorlist.centos.org/?release=7&arch=x86_64&repo=os "
           "error was\n"
           "14: curl#6 - \"Could not resolve host: mirrorlist.centos.org; "
           "Unknown error\"\n";
  }

  if (cmd == "pip" || cmd == "pip3") {
    const std::string pkg = argv.size() > 2 ? argv[2] : "";
    return "WARNING: Retrying (Retry(total=0)) after connection broken by "
           "'NewConnectionError': Failed to establish a new connection: "
           "[Errno -3] Temporary failure in name resolution\n"
           "ERROR: Could not find a version that satisfies the requirement " +
           pkg + " (from versions: none)\n"
           "ERROR: No matching distribution found for " + pkg + "\n";
  }

  if (cmd == "wget" || cmd == "curl") {
    std::string url;
    std::string save_as;
    bool to_stdout = cmd == "curl";
    for (std::size_t i = 1; i < argv.size(); ++i) {
      const std::string& a = argv[i];
      if (a == "-O" && cmd == "curl") {
        to_stdout = false;
      } else if ((a == "-o" || a == "--output") && i + 1 < argv.size()) {
        save_as = argv[++i];
        to_stdout = false;
      } else if (a == "-O" && cmd == "wget" && i + 1 < argv.size()) {
        save_as = argv[++i];
      } else if (!a.empty() && a[0] == '-') {
        continue;
      } else {
        url = a;
      }
    }
    if (url.empty()) {
      return cmd == "wget" ? "wget: missing URL\n"
                           : "curl: try 'curl --help' for more information\n";
    }
    return do_download(cmd, url, save_as, to_stdout);
  }

  if (cmd == "ssh" || cmd == "scp" || cmd == "telnet") {
    const std::string host = argv.size() > 1 ? url_host(argv.back()) : "host";
    return cmd + ": connect to host " + host +
           " port 22: Connection timed out\n";
  }

  if (cmd == "nc" || cmd == "ncat") {
    const std::string host = argv.size() > 1 ? argv[1] : "host";
    const std::string port = argv.size() > 2 ? argv[2] : "0";
    return "nc: connect to " + host + " port " + port +
           " (tcp) failed: Connection timed out\n";
  }

  if (cmd == "ping") {
    const std::string host = argv.size() > 1 ? argv.back() : "host";
    return "ping: " + host + ": Temporary failure in name resolution\n";
  }

  if (cmd == "systemctl") {
    return "Failed to connect to bus: No data available\n";
  }
  if (cmd == "service") {
    const std::string svc = argv.size() > 1 ? argv[1] : "";
    return svc + ": unrecognized service\n";
  }

  if (cmd == "ufw") {
    const std::string sub = argv.size() > 1 ? argv[1] : "";
    if (sub == "enable") {
      return "Firewall is active and enabled on system startup\n";
    }
    if (sub == "status") return "Status: inactive\n";
    if (sub == "allow" || sub == "deny") {
      return "Rules updated\nRules updated (v6)\n";
    }
    return "ERROR: not found\n";
  }

  if (cmd == "iptables") {
    return "Chain INPUT (policy ACCEPT)\n"
           "target     prot opt source               destination\n"
           "\n"
           "Chain FORWARD (policy ACCEPT)\n"
           "target     prot opt source               destination\n"
           "\n"
           "Chain OUTPUT (policy ACCEPT)\n"
           "target     prot opt source               destination\n";
  }

  if (cmd == "crontab") {
    if (argv.size() > 1 && argv[1] == "-l") {
      return "no crontab for " + config_.username + "\n";
    }
    return "";
  }

  if (cmd == "clear" || cmd == "true" || cmd == "sync" || cmd == "set" ||
      cmd == "unset" || cmd == "export" || cmd == "alias" || cmd == "sleep") {
    return "";
  }

  if (cmd == "sh" || cmd == "bash") {
    // "bash script.sh" runs nothing; interactive nesting is pointless here.
    if (argv.size() > 1 && argv[1][0] != '-') {
      const std::string abs = resolve(argv[1]);
      if (!fs_.exists(abs)) {
        return cmd + ": " + argv[1] + ": No such file or directory\n";
      }
      return "";
    }
    return "";
  }

  if (cmd == "tar") {
    if (argv.size() < 3) {
      return "tar: You must specify one of the '-Acdtrux' options\n"
             "Try 'tar --help' or 'tar --usage' for more information.\n";
    }
    const std::string mode = argv[1];
    const std::string abs = resolve(argv[2]);
    if (!fs_.exists(abs)) {
      return "tar: " + argv[2] +
             ": Cannot open: No such file or directory\n"
             "tar: Error is not recoverable: exiting now\n";
    }
    if (mode.find('t') != std::string::npos) {
      return stem_of_archive(leaf_of(abs)) + "\n";
    }
    if (mode.find('x') != std::string::npos) {
      const std::string dst =
          FakeFs::normalize(stem_of_archive(leaf_of(abs)), cwd_);
      if (!may_modify(dst)) {
        return "tar: " + leaf_of(dst) +
               ": Cannot open: Permission denied\n"
               "tar: Exiting with failure status due to previous errors\n";
      }
      fs_.write_file(dst, "\x7f" "ELF............(emulated payload)\n",
                     config_.username);
    }
    return "";
  }

  if (cmd == "nohup" && argv.size() > 1) {
    // Pass through; the "appending output" notice lands on the terminal.
    std::vector<std::string> rest(argv.begin() + 1, argv.end());
    return "nohup: ignoring input and appending output to 'nohup.out'\n" +
           run_simple(rest, stdin_text);
  }

  if (cmd.rfind("./", 0) == 0 || cmd[0] == '/') {
    const std::string abs = resolve(cmd);
    if (!fs_.exists(abs)) {
      return "bash: " + cmd + ": No such file or directory\n";
    }
    if (fs_.is_dir(abs)) return "bash: " + cmd + ": Is a directory\n";
    // Nothing in here actually executes.
    return "bash: " + cmd + ": cannot execute binary file: Exec format error\n";
  }

  return "bash: " + cmd + ": command not found\n";
}

void ShellSession::close(const std::string& reason) {
  if (closed_) {
    throw SessionStateError("session " + session_id_ + " already closed");
  }
  closed_ = true;
  close_reason_ = reason;
  const TimeMs now = clock_.now_ms();
  logging::Event ev =
      logging::Event::make(logging::kEvClosed, now, session_id_);
  ev.body["reason"] = reason;
  ev.body["duration"] = static_cast<double>(now - started_ms_) / 1000.0;
  ev.body["commands"] = command_count_;
  log_event(std::move(ev));
}

}  // namespace gamepot::shell
