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

#include "gamepot/capture.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "gamepot/errors.hpp"

namespace gamepot::shell {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr ||
      EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hexdigits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hexdigits[digest[i] >> 4]);
    out.push_back(hexdigits[digest[i] & 0xf]);
  }
  return out;
}

CaptureStore::CaptureStore(std::string directory)
    : directory_(std::move(directory)) {
  if (!directory_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(directory_, ec);
    if (ec) throw ConfigError("cannot create capture directory: " + directory_);
  }
}

CaptureStore::Entry CaptureStore::store(const std::string& url,
                                        const std::string& content) {
  Entry entry;
  entry.sha256 = sha256_hex(content);
  entry.url = url;
  entry.size = content.size();
  std::lock_guard<std::mutex> lock(mutex_);
  const auto [it, inserted] = first_url_by_hash_.emplace(entry.sha256, url);
  entry.new_capture = inserted;
  if (inserted && !directory_.empty()) {
    std::ofstream out(std::filesystem::path(directory_) / entry.sha256,
                      std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
  return entry;
}

bool CaptureStore::contains_hash(const std::string& sha256) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return first_url_by_hash_.count(sha256) > 0;
}

std::size_t CaptureStore::unique_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return first_url_by_hash_.size();
}

Fetcher::Result OfflineFetcher::fetch(const std::string& url) {
  Fetcher::Result r;
  r.ok = false;
  // Mimic the resolver failure an isolated machine produces.
  std::string host = url;
  const auto scheme = host.find("://");
  if (scheme != std::string::npos) host = host.substr(scheme + 3);
  host = host.substr(0, host.find_first_of("/:"));
  r.error = "Temporary failure in name resolution";
  (void)host;
  return r;
}

Fetcher::Result StubFetcher::fetch(const std::string& url) {
  Fetcher::Result r;
  r.ok = true;
  // Deterministic pseudo-binary payload: same URL, same bytes, so capture
  // deduplication is exercised end to end.
  const std::string tag = sha256_hex("payload:" + url);
  std::ostringstream os;
  os << "\x7f" << "ELF-ish stub payload\n" << "url=" << url << "\n"
     << "tag=" << tag << "\n";
  for (int i = 0; i < 32; ++i) {
    os << tag << "\n";
  }
  r.content = os.str();
  return r;
}

HttpFetcher::HttpFetcher(int timeout_seconds)
    : timeout_seconds_(timeout_seconds) {}

Fetcher::Result HttpFetcher::fetch(const std::string& url) {
  Fetcher::Result r;
  if (url.rfind("http://", 0) != 0) {
    r.error = "only http:// URLs are supported";
    return r;
  }
  const std::string rest = url.substr(7);
  const auto slash = rest.find('/');
  const std::string host = rest.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  httplib::Client client(host);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  auto res = client.Get(path);
  if (!res) {
    r.error = "connection failed";
    return r;
  }
  if (res->status != 200) {
    r.error = "HTTP " + std::to_string(res->status);
    return r;
  }
  r.ok = true;
  r.content = res->body;
  return r;
}

}  // namespace gamepot::shell
