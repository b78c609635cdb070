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

#include "gamepot/fakefs.hpp"

#include <algorithm>
#include <sstream>

#include "gamepot/errors.hpp"

namespace gamepot::shell {

namespace {

std::vector<std::string> split_path(const std::string& abs) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : abs) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::string parent_of(const std::string& abs) {
  const auto pos = abs.find_last_of('/');
  return pos == 0 ? "/" : abs.substr(0, pos);
}

std::string leaf_of(const std::string& abs) {
  return abs.substr(abs.find_last_of('/') + 1);
}

}  // namespace

FakeFs::FakeFs() {
  root_.is_dir = true;
  root_.mode = "drwxr-xr-x";
}

std::string FakeFs::normalize(const std::string& path,
                              const std::string& base) {
  if (base.empty() || base[0] != '/') {
    throw DomainError("base path must be absolute");
  }
  std::vector<std::string> stack;
  if (!path.empty() && path[0] == '/') {
    // absolute path replaces the base
  } else {
    stack = split_path(base);
  }
  for (const std::string& part : split_path(path)) {
    if (part == ".") continue;
    if (part == "..") {
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    stack.push_back(part);
  }
  std::string out = "/";
  for (size_t i = 0; i < stack.size(); ++i) {
    if (i) out += "/";
    out += stack[i];
  }
  return out;
}

const FakeFs::Node* FakeFs::find(const std::string& abs) const {
  const Node* node = &root_;
  for (const std::string& part : split_path(abs)) {
    if (!node->is_dir) return nullptr;
    const auto it = node->children.find(part);
    if (it == node->children.end()) return nullptr;
    node = &it->second;
  }
  return node;
}

FakeFs::Node* FakeFs::find_mutable(const std::string& abs) {
  Node* node = &root_;
  for (const std::string& part : split_path(abs)) {
    if (!node->is_dir) return nullptr;
    const auto it = node->children.find(part);
    if (it == node->children.end()) return nullptr;
    node = &it->second;
  }
  return node;
}

bool FakeFs::exists(const std::string& abs) const { return find(abs) != nullptr; }

bool FakeFs::is_dir(const std::string& abs) const {
  const Node* n = find(abs);
  return n != nullptr && n->is_dir;
}

void FakeFs::mkdir(const std::string& abs, const std::string& owner) {
  Node* parent = find_mutable(parent_of(abs));
  if (parent == nullptr || !parent->is_dir) {
    throw DomainError("no such directory: " + parent_of(abs));
  }
  const std::string name = leaf_of(abs);
  if (name.empty() || parent->children.count(name)) {
    throw DomainError("path already exists: " + abs);
  }
  Node dir;
  dir.is_dir = true;
  dir.owner = owner;
  dir.group = owner;
  dir.mode = "drwxr-xr-x";
  parent->children.emplace(name, std::move(dir));
}

void FakeFs::write_file(const std::string& abs, const std::string& content,
                        const std::string& owner, bool append) {
  Node* parent = find_mutable(parent_of(abs));
  if (parent == nullptr || !parent->is_dir) {
    throw DomainError("no such directory: " + parent_of(abs));
  }
  const std::string name = leaf_of(abs);
  if (name.empty()) throw DomainError("empty file name");
  auto it = parent->children.find(name);
  if (it == parent->children.end()) {
    Node file;
    file.owner = owner;
    file.group = owner;
    file.mode = "-rw-r--r--";
    file.content = content;
    parent->children.emplace(name, std::move(file));
    return;
  }
  if (it->second.is_dir) throw DomainError("is a directory: " + abs);
  if (append) {
    it->second.content += content;
  } else {
    it->second.content = content;
  }
}

bool FakeFs::remove(const std::string& abs, bool recursive) {
  if (abs == "/") {
    if (!recursive) return false;
    root_.children.clear();  // rm -rf /: obliging, in its own little world
    return true;
  }
  Node* parent = find_mutable(parent_of(abs));
  if (parent == nullptr || !parent->is_dir) return false;
  const auto it = parent->children.find(leaf_of(abs));
  if (it == parent->children.end()) return false;
  if (it->second.is_dir && !it->second.children.empty() && !recursive) {
    return false;
  }
  parent->children.erase(it);
  return true;
}

std::vector<std::string> FakeFs::list(const std::string& abs) const {
  const Node* n = find(abs);
  if (n == nullptr || !n->is_dir) {
    throw DomainError("not a directory: " + abs);
  }
  std::vector<std::string> names;
  for (const auto& [name, child] : n->children) names.push_back(name);
  return names;  // std::map keeps them sorted
}

const std::string& FakeFs::read(const std::string& abs) const {
  const Node* n = find(abs);
  if (n == nullptr || n->is_dir) {
    throw DomainError("not a file: " + abs);
  }
  return n->content;
}

namespace {

int count_files(const FakeFs::Node& node) {
  if (!node.is_dir) return 1;
  int n = 0;
  for (const auto& [name, child] : node.children) n += count_files(child);
  return n;
}

int depth_of(const FakeFs::Node& node) {
  if (!node.is_dir || node.children.empty()) return 0;
  int best = 0;
  for (const auto& [name, child] : node.children) {
    best = std::max(best, 1 + depth_of(child));
  }
  return best;
}

}  // namespace

int FakeFs::file_count() const { return count_files(root_); }

int FakeFs::max_depth() const { return depth_of(root_); }

FakeFs build_default_fs() {
  FakeFs fs;
  auto dir = [&fs](const std::string& p, const std::string& owner = "root") {
    fs.mkdir(p, owner);
  };
  auto file = [&fs](const std::string& p, const std::string& content,
                    const std::string& owner = "root") {
    fs.write_file(p, content, owner);
  };

  for (const char* p : {"/bin", "/etc", "/home", "/opt", "/root", "/srv",
                        "/tmp", "/usr", "/var"}) {
    dir(p);
  }
  dir("/usr/bin");
  dir("/usr/local");
  dir("/var/log");
  dir("/var/www");
  dir("/var/www/html");

  file("/etc/hostname", "svr04\n");
  file("/etc/hosts",
       "127.0.0.1 localhost\n127.0.1.1 svr04\n10.0.2.4 backup01\n");
  file("/etc/passwd",
       "root:x:0:0:root:/root:/bin/bash\n"
       "daemon:x:1:1:daemon:/usr/sbin:/usr/sbin/nologin\n"
       "www-data:x:33:33:www-data:/var/www:/usr/sbin/nologin\n"
       "sshd:x:106:65534::/run/sshd:/usr/sbin/nologin\n"
       "anna:x:1000:1000:Anna Keller,,,:/home/anna:/bin/bash\n"
       "bruno:x:1001:1001:Bruno Maier,,,:/home/bruno:/bin/bash\n");
  file("/etc/issue", "Ubuntu 22.04.3 LTS \\n \\l\n");
  file("/etc/crontab",
       "SHELL=/bin/sh\n"
       "17 * * * * root cd / && run-parts --report /etc/cron.hourly\n"
       "25 6 * * * root test -x /usr/sbin/anacron || run-parts "
       "--report /etc/cron.daily\n");
  file("/var/log/auth.log",
       "Aug 12 06:25:01 svr04 CRON[1841]: pam_unix(cron:session): session "
       "opened for user root by (uid=0)\n"
       "Aug 12 06:25:01 svr04 CRON[1841]: pam_unix(cron:session): session "
       "closed for user root\n");
  file("/var/log/syslog",
       "Aug 12 06:17:01 svr04 systemd[1]: Starting Daily apt upgrade and "
       "clean activities...\n");
  file("/var/www/html/index.html",
       "<html><head><title>svr04</title></head><body>It works!</body></html>\n");

  // Command stubs so `ls /usr/bin` looks inhabited.
  for (const char* cmd :
       {"ls", "cat", "echo", "grep", "ps", "top", "vim", "nano", "perl",
        "python3", "ssh", "scp", "tar", "gzip", "curl", "wget", "make", "gcc",
        "find", "awk", "sed"}) {
    file(std::string("/usr/bin/") + cmd, "");
  }

  // Anna: the tidy one. Work tree goes four levels below the home directory.
  dir("/home/anna", "anna");
  dir("/home/anna/work", "anna");
  dir("/home/anna/work/reports", "anna");
  dir("/home/anna/work/reports/2023", "anna");
  dir("/home/anna/work/reports/2024", "anna");
  dir("/home/anna/work/reports/2024/q3", "anna");
  dir("/home/anna/private", "anna");
  dir("/home/anna/private/scans", "anna");
  file("/home/anna/.bashrc", "# ~/.bashrc\nalias ll='ls -la'\n", "anna");
  file("/home/anna/.bash_history",
       "cd work/reports/2024\nls -la\nvim q3/forecast.xlsx\nexit\n", "anna");
  file("/home/anna/todo.txt",
       "- rotate backup tapes\n- ask bruno about the postgres upgrade\n"
       "- CHANGE ROUTER PASSWORD (still admin/admin!!)\n",
       "anna");
  file("/home/anna/work/notes.md",
       "# Ops notes\nbackup01 mounts /srv/backup via nfs, cron at 03:15\n",
       "anna");
  file("/home/anna/work/reports/2023/annual.txt",
       "FY2023 closed at +4.1% yoy. Full ledger in finance share.\n", "anna");
  file("/home/anna/work/reports/2024/q3/forecast.xlsx",
       "PK\x03\x04 placeholder spreadsheet bytes\n", "anna");
  file("/home/anna/work/reports/2024/q3/summary.txt",
       "Q3 forecast: on track. Risks: disk budget, ssl cert renewals.\n",
       "anna");
  file("/home/anna/private/banking.csv",
       "date,account,amount\n2024-07-02,DE44100110012345678901,-120.50\n",
       "anna");
  file("/home/anna/private/scans/passport.jpg",
       "\xff\xd8\xff placeholder jpeg bytes", "anna");

  // Bruno: the messy one.
  dir("/home/bruno", "bruno");
  dir("/home/bruno/work", "bruno");
  dir("/home/bruno/work/deploy", "bruno");
  dir("/home/bruno/work/deploy/staging", "bruno");
  dir("/home/bruno/private", "bruno");
  file("/home/bruno/.bashrc", "# ~/.bashrc\nexport EDITOR=nano\n", "bruno");
  file("/home/bruno/notes.txt",
       "pg_dump nightly to /srv/backup/db — ask anna for the new key\n",
       "bruno");
  file("/home/bruno/work/deploy/run.sh",
       "#!/bin/sh\nrsync -av ./staging/ deploy@web01:/srv/app/\n", "bruno");
  file("/home/bruno/work/deploy/staging/app.conf",
       "listen 8080\nupstream db01:5432\n", "bruno");
  file("/home/bruno/work/deploy/staging/secrets.env",
       "DB_PASSWORD=hunter2\nAPI_TOKEN=tok_9f81aa\n", "bruno");
  file("/home/bruno/private/diary.txt",
       "Monday: coffee machine broke again. Considering sabotage.\n", "bruno");

  file("/root/.bashrc", "# ~/.bashrc\n");
  dir("/srv/backup");
  file("/srv/backup/README",
       "Nightly dumps land here. Retention 14 days. Do not touch.\n");

  return fs;
}

}  // namespace gamepot::shell
