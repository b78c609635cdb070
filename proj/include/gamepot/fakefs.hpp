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

#ifndef GAMEPOT_FAKEFS_HPP_
#define GAMEPOT_FAKEFS_HPP_

#include <map>
#include <string>
#include <vector>

namespace gamepot::shell {

/// In-memory file tree shown to attackers. Value semantics: every session
/// copies the base image, so vandalism never leaks across sessions.
class FakeFs {
 public:
  struct Node {
    bool is_dir = false;
    std::string owner = "root";
    std::string group = "root";
    std::string mode;  // e.g. "drwxr-xr-x" / "-rw-r--r--"
    std::string content;
    std::map<std::string, Node> children;
  };

  FakeFs();

  /// Collapses ".", "..", duplicate slashes. `base` anchors relative paths
  /// and must itself be absolute. Result is absolute and starts with '/'.
  static std::string normalize(const std::string& path,
                               const std::string& base);

  bool exists(const std::string& abs) const;
  bool is_dir(const std::string& abs) const;
  const Node* find(const std::string& abs) const;

  /// Parent must exist; throws DomainError otherwise or when the path is
  /// already taken (mkdir) / is a directory (write_file with replace).
  void mkdir(const std::string& abs, const std::string& owner = "root");
  void write_file(const std::string& abs, const std::string& content,
                  const std::string& owner = "root", bool append = false);
  /// False when the path does not exist. Directories need recursive=true
  /// unless empty.
  bool remove(const std::string& abs, bool recursive);

  /// Child names, sorted. Throws DomainError when not a directory.
  std::vector<std::string> list(const std::string& abs) const;
  const std::string& read(const std::string& abs) const;

  int file_count() const;
  int max_depth() const;

 private:
  Node* find_mutable(const std::string& abs);
  Node root_;
};

/// The shipped disk image: a small Ubuntu-flavored server with two home
/// directories (anna, bruno) holding work and private trees.
FakeFs build_default_fs();

}  // namespace gamepot::shell

#endif  // GAMEPOT_FAKEFS_HPP_
