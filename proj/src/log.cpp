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

#include "gamepot/log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gamepot/errors.hpp"

namespace gamepot::logging {

using nlohmann::json;

Event Event::make(const std::string& eventid, TimeMs timestamp_ms,
                  const std::string& session) {
  Event e;
  e.body["schema"] = 1;
  e.body["eventid"] = eventid;
  e.body["timestamp"] = format_iso8601_ms(timestamp_ms);
  e.body["session"] = session;
  return e;
}

std::string Event::eventid() const {
  return body.at("eventid").get<std::string>();
}

std::string Event::session() const {
  return body.at("session").get<std::string>();
}

TimeMs Event::timestamp_ms() const {
  return parse_iso8601_ms(body.at("timestamp").get<std::string>());
}

std::string Event::serialize() const { return body.dump(); }

Event parse_event(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw LogParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!j.is_object()) throw LogParseError("event is not an object", 0);
  if (!j.contains("schema") || !j["schema"].is_number_integer() ||
      j["schema"].get<int>() != 1) {
    throw LogParseError("missing or unsupported schema", 0);
  }
  for (const char* field : {"eventid", "timestamp", "session"}) {
    if (!j.contains(field) || !j[field].is_string()) {
      throw LogParseError(std::string("missing field: ") + field, 0);
    }
  }
  try {
    parse_iso8601_ms(j["timestamp"].get<std::string>());
  } catch (const DomainError& e) {
    throw LogParseError(std::string("bad timestamp: ") + e.what(), 0);
  }
  Event e;
  e.body = std::move(j);
  return e;
}

ParseResult parse_log(std::istream& in, bool strict) {
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      result.events.push_back(parse_event(line));
    } catch (const LogParseError& e) {
      if (strict) throw LogParseError(e.what(), lineno);
      std::ostringstream os;
      os << "line " << lineno << ": " << e.what();
      result.warnings.push_back(os.str());
    }
  }
  return result;
}

ParseResult parse_log_file(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open log file: " + path);
  return parse_log(in, strict);
}

Writer::Writer(Options options) : options_(std::move(options)) {
  if (options_.path.empty()) throw ConfigError("log path must not be empty");
  if (options_.max_bytes < 1024) {
    throw ConfigError("log max_bytes must be at least 1 KiB");
  }
  if (options_.max_files < 1) {
    throw ConfigError("log max_files must be at least 1");
  }
  file_ = std::fopen(options_.path.c_str(), "ab");
  if (!file_) throw ConfigError("cannot open log for append: " + options_.path);
  std::fseek(file_, 0, SEEK_END);
  const long pos = std::ftell(file_);
  bytes_ = pos > 0 ? static_cast<std::size_t>(pos) : 0;
}

Writer::~Writer() {
  if (file_) std::fclose(file_);
}

void Writer::rotate_locked() {
  std::fclose(file_);
  file_ = nullptr;
  std::remove((options_.path + "." + std::to_string(options_.max_files)).c_str());
  for (int k = options_.max_files - 1; k >= 1; --k) {
    std::rename((options_.path + "." + std::to_string(k)).c_str(),
                (options_.path + "." + std::to_string(k + 1)).c_str());
  }
  std::rename(options_.path.c_str(), (options_.path + ".1").c_str());
  file_ = std::fopen(options_.path.c_str(), "ab");
  if (!file_) throw ConfigError("cannot reopen log after rotation");
  bytes_ = 0;
}

void Writer::write(const Event& event) {
  const std::string line = event.serialize() + "\n";
  std::lock_guard<std::mutex> lock(mutex_);
  if (bytes_ > 0 && bytes_ + line.size() > options_.max_bytes) {
    rotate_locked();
  }
  std::fwrite(line.data(), 1, line.size(), file_);
  bytes_ += line.size();
}

void Writer::flush() {
  std::lock_guard<std::mutex> lock(mutex_);
  std::fflush(file_);
}

SessionsReport sessions_from_events(const std::vector<Event>& events) {
  SessionsReport report;
  std::map<std::string, std::size_t> index;

  auto summary_of = [&](const std::string& id) -> SessionSummary& {
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, report.sessions.size()).first;
      report.sessions.emplace_back();
      report.sessions.back().session = id;
    }
    return report.sessions[it->second];
  };

  std::map<std::string, TimeMs> first_ts;
  std::map<std::string, TimeMs> last_ts;

  for (const Event& e : events) {
    const std::string id = e.session();
    const std::string kind = e.eventid();
    const TimeMs ts = e.timestamp_ms();
    SessionSummary& s = summary_of(id);

    if (!first_ts.count(id)) first_ts[id] = ts;
    last_ts[id] = std::max(last_ts.count(id) ? last_ts[id] : ts, ts);

    if (e.body.contains("instance") && e.body["instance"].is_string()) {
      s.instance = e.body["instance"].get<std::string>();
    }

    if (kind == kEvConnect) {
      if (s.connect_ms >= 0) {
        report.anomalies.push_back("session " + id + ": duplicate connect");
      }
      s.connect_ms = ts;
      if (e.body.contains("src_ip") && e.body["src_ip"].is_string()) {
        s.src_ip = e.body["src_ip"].get<std::string>();
      }
    } else if (kind == kEvLoginSuccess) {
      s.login_succeeded = true;
      if (s.login_ms < 0) s.login_ms = ts;
    } else if (kind == kEvLoginFailed) {
      ++s.logins_failed;
    } else if (kind == kEvCommandInput) {
      ++s.command_count;
    } else if (kind == kEvKeystroke) {
      ++s.keystrokes;
    } else if (kind == kEvPolicyAction) {
      if (e.body.contains("action") && e.body["action"].is_string()) {
        ++s.policy_actions[e.body["action"].get<std::string>()];
      }
    } else if (kind == kEvDownload) {
      ++s.downloads;
    } else if (kind == kEvClosed) {
      if (s.close_ms >= 0) {
        report.anomalies.push_back("session " + id + ": duplicate close");
      }
      s.close_ms = ts;
    }
  }

  for (SessionSummary& s : report.sessions) {
    if (s.connect_ms < 0) {
      report.anomalies.push_back("session " + s.session + ": no connect event");
    }
    if (s.close_ms < 0) {
      report.anomalies.push_back("session " + s.session + ": no close event");
    }
    s.complete = s.connect_ms >= 0 && s.close_ms >= 0;
    const TimeMs start = s.login_ms >= 0 ? s.login_ms
                         : s.connect_ms >= 0 ? s.connect_ms
                                             : first_ts[s.session];
    const TimeMs end = s.close_ms >= 0 ? s.close_ms : last_ts[s.session];
    s.duration_seconds = end >= start ? (end - start) / 1000.0 : 0.0;
    if (end < start) {
      report.anomalies.push_back("session " + s.session +
                                 ": close precedes start");
    }
  }
  return report;
}

}  // namespace gamepot::logging
