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

#ifndef GAMEPOT_CAPTURE_HPP_
#define GAMEPOT_CAPTURE_HPP_

#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace gamepot::shell {

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

/// Payloads pulled in by attackers, deduplicated by content hash. With a
/// directory configured each new payload is persisted as <dir>/<sha256>.
class CaptureStore {
 public:
  CaptureStore() = default;
  explicit CaptureStore(std::string directory);

  struct Entry {
    std::string sha256;
    std::string url;
    std::size_t size = 0;
    bool new_capture = false;  // false when the same bytes were seen before
  };

  Entry store(const std::string& url, const std::string& content);
  bool contains_hash(const std::string& sha256) const;
  std::size_t unique_count() const;

 private:
  std::string directory_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> first_url_by_hash_;
};

/// How wget/curl obtain bytes. The shell never talks to the network unless
/// explicitly given a fetcher that does.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  struct Result {
    bool ok = false;
    std::string content;
    std::string error;  // human-readable cause when !ok
  };
  virtual Result fetch(const std::string& url) = 0;
};

/// Every fetch fails like an airgapped box: name resolution error.
class OfflineFetcher final : public Fetcher {
 public:
  Result fetch(const std::string& url) override;
};

/// Deterministic fake payloads derived from the URL; downloads appear to
/// succeed so the attacker keeps talking. Used by default.
class StubFetcher final : public Fetcher {
 public:
  Result fetch(const std::string& url) override;
};

/// Real HTTP GET (http:// URLs only). Opt-in for live capture deployments.
class HttpFetcher final : public Fetcher {
 public:
  explicit HttpFetcher(int timeout_seconds = 10);
  Result fetch(const std::string& url) override;

 private:
  int timeout_seconds_;
};

}  // namespace gamepot::shell

#endif  // GAMEPOT_CAPTURE_HPP_
