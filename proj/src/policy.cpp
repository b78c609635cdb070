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

#include "gamepot/policy.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "gamepot/errors.hpp"
#include "gamepot/rng.hpp"

namespace gamepot::policy {

namespace {

class MixedPolicy final : public Policy {
 public:
  MixedPolicy(std::string name, std::array<double, 3> mixture,
              std::uint64_t seed)
      : name_(std::move(name)), mixture_(mixture), rng_(seed) {}

  const std::string& name() const override { return name_; }
  std::array<double, 3> distribution() const override { return mixture_; }

  PolicyDecision decide(const std::string&) override {
    const double u = uniform01(rng_);
    PolicyDecision d;
    if (u < mixture_[0]) {
      d.action = game::DefenderAction::allow;
    } else if (u < mixture_[0] + mixture_[1]) {
      d.action = game::DefenderAction::block;
      d.message =
          block_messages()[uniform_index(rng_, block_messages().size())];
    } else {
      d.action = game::DefenderAction::insult;
      d.message =
          insult_messages()[uniform_index(rng_, insult_messages().size())];
    }
    return d;
  }

 private:
  std::string name_;
  std::array<double, 3> mixture_;
  std::mt19937_64 rng_;
};

std::array<double, 3> validated_mixture(double allow, double block,
                                        double insult) {
  for (double v : {allow, block, insult}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("mixture probabilities must be non-negative");
    }
  }
  if (std::fabs(allow + block + insult - 1.0) > 1e-9) {
    throw ConfigError("mixture must sum to 1");
  }
  return {allow, block, insult};
}

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& name,
                                    std::uint64_t seed) {
  if (name == "gamepot") {
    // Equilibrium mixture of the shipped game: uniform over the three
    // deceptive-state actions.
    return std::make_unique<MixedPolicy>(
        name, std::array<double, 3>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, seed);
  }
  if (name == "control") {
    return std::make_unique<MixedPolicy>(
        name, std::array<double, 3>{1.0, 0.0, 0.0}, seed);
  }
  if (name == "heliza") {
    throw ConfigError(
        "the heliza mixture is not shipped; provide one via "
        "make_policy_from_config (see configs/heliza.example.json)");
  }
  throw DomainError("unknown policy: " + name);
}

std::unique_ptr<Policy> make_policy_from_config(const std::string& json_text,
                                                std::uint64_t seed) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid policy config: ") + e.what());
  }
  try {
    const std::string name = j.at("name").get<std::string>();
    if (name.empty()) throw ConfigError("policy name must not be empty");
    const auto& mix = j.at("mixture");
    const auto mixture = validated_mixture(mix.value("allow", 0.0),
                                           mix.value("block", 0.0),
                                           mix.value("insult", 0.0));
    return std::make_unique<MixedPolicy>(name, mixture, seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid policy config: ") + e.what());
  }
}

const std::vector<std::string>& block_messages() {
  static const std::vector<std::string> kMessages = {
      "Operation not permitted",
      "Permission denied",
      "Input/output error",
      "No such device or address",
      "Resource temporarily unavailable",
      "Cannot allocate memory",
      "Device or resource busy",
      "Invalid argument",
      "Too many open files",
      "Text file busy",
      "No space left on device",
      "Read-only file system",
      "Broken pipe",
      "Numerical result out of range",
      "Resource deadlock avoided",
      "No locks available",
      "Function not implemented",
      "Value too large for defined data type",
      "Operation not supported",
      "Connection reset by peer",
      "No buffer space available",
      "Transport endpoint is not connected",
      "Connection timed out",
      "Connection refused",
      "Operation now in progress",
      "Interrupted system call",
  };
  return kMessages;
}

const std::vector<std::string>& insult_messages() {
  static const std::vector<std::string> kMessages = {
      "Oh, splendid. Another keyboard cowboy.",
      "That command was adorable. Try again with feeling.",
      "My circuits have seen toddlers type with more menace.",
      "Denied. And frankly, embarrassing.",
      "You kiss your motherboard with those fingers?",
      "I have logs older than your technique.",
      "A bold strategy: typing nonsense until something breaks.",
      "This machine eats script kiddies for breakfast.",
      "Was that supposed to be an exploit or a cry for help?",
      "Fascinating. Wrong, but fascinating.",
      "I would explain why that failed, but you seem busy flailing.",
      "Somewhere, a sysadmin is laughing at you. It's me.",
      "Your persistence is noted. Your skill, not so much.",
      "Still not root. Still not close.",
      "That's not how any of this works.",
      "Go on, try sudo again. It tickles.",
      "I've buffered insults faster than your typing.",
      "You bring shame upon your botnet.",
      "Security through your incompetence: working as designed.",
      "The 1990s called; they want their rootkit back.",
      "Keep going. I'm grading on a curve, and you're still failing.",
      "Your shell-fu is weak, grasshopper.",
      "I'd call that a brute-force attack, but there's no force in it.",
      "Today's forecast: 100% chance of access denied.",
  };
  return kMessages;
}

}  // namespace gamepot::policy
