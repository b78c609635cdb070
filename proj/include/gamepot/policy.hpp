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

#ifndef GAMEPOT_POLICY_HPP_
#define GAMEPOT_POLICY_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gamepot/game.hpp"

namespace gamepot::policy {

/// What the defender does with one command: the sampled action plus the text
/// shown to the attacker (empty for allow; an error line for block; a taunt
/// for insult). The shell prepends its own "bash: <command>: " framing to
/// block messages.
struct PolicyDecision {
  game::DefenderAction action = game::DefenderAction::allow;
  std::string message;
};

/// A per-session defender. Decisions are drawn from a fixed mixture with a
/// seeded generator, so equal seeds give byte-equal decision streams.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual const std::string& name() const = 0;
  /// Mixture over {allow, block, insult}, in that order.
  virtual std::array<double, 3> distribution() const = 0;
  /// Samples the next decision; advances the stream.
  virtual PolicyDecision decide(const std::string& command) = 0;
};

/// Built-in policies:
///   "gamepot": the solved-game decoy mixture, uniform over all three actions
///   "control": plain allow-everything (a decoy that never interferes)
/// "heliza" is recognized but ships without numbers; constructing it here
/// throws ConfigError pointing at make_policy_from_config. Unknown names
/// throw DomainError.
std::unique_ptr<Policy> make_policy(const std::string& name,
                                    std::uint64_t seed);

/// Policy from a JSON config: {"name": ..., "mixture": {"allow": a, "block":
/// b, "insult": c}} with a nonnegative mixture summing to 1. Throws
/// ConfigError on malformed input.
std::unique_ptr<Policy> make_policy_from_config(const std::string& json_text,
                                                std::uint64_t seed);

/// Block responses, styled after kernel error strings.
const std::vector<std::string>& block_messages();

/// Taunts for the insult action.
const std::vector<std::string>& insult_messages();

}  // namespace gamepot::policy

#endif  // GAMEPOT_POLICY_HPP_
