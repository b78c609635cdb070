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

#include "gamepot/game.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gamepot/errors.hpp"

namespace gamepot::game {

namespace {

using nlohmann::json;

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << p;
    throw DomainError(os.str());
  }
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite";
    throw DomainError(os.str());
  }
}

}  // namespace

const char* to_string(PlayerId p) {
  return p == PlayerId::attacker ? "attacker" : "defender";
}

const char* to_string(WorldState s) {
  return s == WorldState::deceptive ? "deceptive" : "production";
}

const char* to_string(AttackerAction a) {
  return a == AttackerAction::attack ? "attack" : "resign";
}

const char* to_string(DefenderAction a) {
  switch (a) {
    case DefenderAction::allow:
      return "allow";
    case DefenderAction::block:
      return "block";
    case DefenderAction::insult:
      return "insult";
  }
  return "?";
}

DefenderAction defender_action_from_string(const std::string& name) {
  if (name == "allow") return DefenderAction::allow;
  if (name == "block") return DefenderAction::block;
  if (name == "insult") return DefenderAction::insult;
  throw DomainError("unknown defender action: " + name);
}

BeliefState::BeliefState(double deceptive, double production)
    : p_deceptive(deceptive), p_production(production) {
  check_prob(deceptive, "p_deceptive");
  check_prob(production, "p_production");
  if (std::fabs(deceptive + production - 1.0) > 1e-12) {
    throw DomainError("belief must sum to 1");
  }
}

BeliefState bayes_update(const BeliefState& prior, double likelihood_deceptive,
                         double likelihood_production) {
  if (!(likelihood_deceptive >= 0.0) || !(likelihood_production >= 0.0) ||
      !std::isfinite(likelihood_deceptive) ||
      !std::isfinite(likelihood_production)) {
    throw DomainError("likelihoods must be finite and non-negative");
  }
  const double joint_dec = prior.p_deceptive * likelihood_deceptive;
  const double joint_prod = prior.p_production * likelihood_production;
  const double evidence = joint_dec + joint_prod;
  if (evidence <= 0.0) {
    throw DomainError("zero total evidence; posterior undefined");
  }
  // Renormalize through from_deceptive so 1e-12 sum checks never trip on
  // rounding in the division.
  return BeliefState::from_deceptive(joint_dec / evidence);
}

void RewardParams::validate() const {
  check_finite(value, "value");
  check_finite(win, "win");
  check_finite(intrinsic, "intrinsic");
  check_finite(prestige, "prestige");
  check_finite(attack_cost, "attack_cost");
  check_finite(insight, "insight");
  check_finite(deception_cost, "deception_cost");
  check_finite(engagement, "engagement");
  check_finite(breach_cost, "breach_cost");
  check_prob(p_value, "p_value");
  check_prob(p_win, "p_win");
  check_prob(p_intrinsic, "p_intrinsic");
  check_prob(p_prestige, "p_prestige");
  check_prob(p_attack_cost, "p_attack_cost");
  check_prob(p_insight, "p_insight");
  check_prob(p_deception_cost, "p_deception_cost");
  check_prob(p_engagement, "p_engagement");
  check_prob(p_breach_cost, "p_breach_cost");
}

double seu_attacker(const RewardParams& p) {
  return p.p_value * p.value + p.p_win * p.win + p.p_intrinsic * p.intrinsic +
         p.p_prestige * p.prestige - p.p_attack_cost * p.attack_cost;
}

double seu_defender_deceptive(const RewardParams& p) {
  return p.p_insight * p.insight -
         (p.p_deception_cost * p.deception_cost - p.p_engagement * p.engagement);
}

double seu_defender_production(const RewardParams& p) {
  return -p.p_breach_cost * p.breach_cost;
}

OutcomeTable default_outcome_table() {
  OutcomeTable t;
  const AttackerTerms decoy_attack{
      /*value=*/false, /*win=*/false, /*intrinsic=*/true,
      /*prestige=*/true, /*attack_cost=*/true};

  t.deceptive_attack_allow.attacker = decoy_attack;
  t.deceptive_attack_allow.defender.insight = true;

  t.deceptive_attack_block.attacker = decoy_attack;
  t.deceptive_attack_block.defender.engagement = true;

  t.deceptive_attack_insult.attacker = decoy_attack;
  t.deceptive_attack_insult.defender.insight = true;
  t.deceptive_attack_insult.defender.engagement = true;
  t.deceptive_attack_insult.defender.deception_cost = true;

  t.production_attack_allow.attacker = {
      /*value=*/true, /*win=*/true, /*intrinsic=*/false,
      /*prestige=*/false, /*attack_cost=*/true};
  t.production_attack_allow.defender.breach_cost = true;

  t.production_attack_block.attacker.attack_cost = true;

  // deceptive_resign / production_resign keep everything inactive.
  return t;
}

RewardParams apply_terms(const RewardParams& params, const AttackerTerms& a,
                         const DefenderTerms& d) {
  RewardParams out = params;
  if (!a.value) out.value = 0.0;
  if (!a.win) out.win = 0.0;
  if (!a.intrinsic) out.intrinsic = 0.0;
  if (!a.prestige) out.prestige = 0.0;
  if (!a.attack_cost) out.attack_cost = 0.0;
  if (!d.insight) out.insight = 0.0;
  if (!d.deception_cost) out.deception_cost = 0.0;
  if (!d.engagement) out.engagement = 0.0;
  if (!d.breach_cost) out.breach_cost = 0.0;
  return out;
}

void GameSpec::validate() const {
  if (states.size() != 2) {
    throw DomainError("game must have exactly two states");
  }
  if (attacker_actions.empty()) {
    throw DomainError("attacker must have at least one action");
  }
  double total = 0.0;
  for (const auto& s : states) {
    check_prob(s.probability, "state probability");
    total += s.probability;
    if (s.outcomes.size() != attacker_actions.size()) {
      throw DomainError("state '" + s.name +
                        "' outcome list does not match the attacker actions");
    }
    for (const auto& outcome : s.outcomes) {
      if (const auto* node = std::get_if<DefenderNode>(&outcome)) {
        if (node->moves.empty()) {
          throw DomainError("defender node with no moves in state '" + s.name +
                            "'");
        }
        for (const auto& m : node->moves) {
          if (s.name == "production" && m.action == "insult") {
            throw DomainError("insult is not a legal production-state action");
          }
        }
      }
    }
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw DomainError("state probabilities must sum to 1");
  }
}

int GameSpec::terminal_count() const {
  int n = 0;
  for (const auto& s : states) {
    for (const auto& outcome : s.outcomes) {
      if (const auto* node = std::get_if<DefenderNode>(&outcome)) {
        n += static_cast<int>(node->moves.size());
      } else {
        ++n;
      }
    }
  }
  return n;
}

int GameSpec::info_set_size() const { return static_cast<int>(states.size()); }

GameSpec build_game(const RewardParams& params, const BeliefState& prior,
                    const OutcomeTable& table) {
  params.validate();

  auto terminal = [&params](const OutcomeTerms& terms,
                            WorldState state) -> TerminalPayoff {
    const RewardParams masked =
        apply_terms(params, terms.attacker, terms.defender);
    TerminalPayoff t;
    t.attacker = seu_attacker(masked);
    t.defender = state == WorldState::deceptive
                     ? seu_defender_deceptive(masked)
                     : seu_defender_production(masked);
    return t;
  };

  GameSpec g;
  g.name = "deception-game";
  g.attacker_actions = {"attack", "resign"};

  StateBranch deceptive;
  deceptive.name = "deceptive";
  deceptive.probability = prior.p_deceptive;
  DefenderNode dec_node;
  dec_node.moves = {
      {"allow", terminal(table.deceptive_attack_allow, WorldState::deceptive)},
      {"block", terminal(table.deceptive_attack_block, WorldState::deceptive)},
      {"insult",
       terminal(table.deceptive_attack_insult, WorldState::deceptive)},
  };
  deceptive.outcomes.emplace_back(std::move(dec_node));
  deceptive.outcomes.emplace_back(
      terminal(table.deceptive_resign, WorldState::deceptive));

  StateBranch production;
  production.name = "production";
  production.probability = prior.p_production;
  DefenderNode prod_node;
  prod_node.moves = {
      {"allow",
       terminal(table.production_attack_allow, WorldState::production)},
      {"block",
       terminal(table.production_attack_block, WorldState::production)},
  };
  production.outcomes.emplace_back(std::move(prod_node));
  production.outcomes.emplace_back(
      terminal(table.production_resign, WorldState::production));

  g.states = {std::move(deceptive), std::move(production)};
  g.validate();
  return g;
}

RewardParams reconstructed_reward_fixture() {
  RewardParams p;
  p.value = 8.0;
  p.win = 4.0;
  p.intrinsic = 6.0;
  p.prestige = 5.0;
  p.attack_cost = 1.0;
  p.insight = 3.0;
  p.deception_cost = 3.0;
  p.engagement = 3.0;
  p.breach_cost = 7.0;
  p.p_value = p.p_win = p.p_intrinsic = p.p_prestige = p.p_attack_cost = 1.0;
  p.p_insight = p.p_deception_cost = p.p_engagement = p.p_breach_cost = 1.0;
  return p;
}

BeliefState default_prior() { return {0.1, 0.9}; }

GameSpec builtin_game(const std::string& name) {
  if (name == "paper") {
    return build_game(reconstructed_reward_fixture(), default_prior());
  }
  throw DomainError("unknown builtin game: " + name);
}

namespace {

json payoff_to_json(const TerminalPayoff& t) {
  return json::array({t.attacker, t.defender});
}

TerminalPayoff payoff_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw DomainError("payoff must be a [attacker, defender] number pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string game_to_json(const GameSpec& game, int indent) {
  json j;
  j["schema"] = 1;
  j["name"] = game.name;
  j["attacker_actions"] = game.attacker_actions;
  j["states"] = json::array();
  for (const auto& s : game.states) {
    json js;
    js["name"] = s.name;
    js["probability"] = s.probability;
    js["outcomes"] = json::array();
    for (const auto& outcome : s.outcomes) {
      json jo;
      if (const auto* node = std::get_if<DefenderNode>(&outcome)) {
        json moves = json::array();
        for (const auto& m : node->moves) {
          moves.push_back({{"action", m.action},
                           {"payoff", payoff_to_json(m.payoff)}});
        }
        jo["defender_moves"] = std::move(moves);
      } else {
        jo["payoff"] = payoff_to_json(std::get<TerminalPayoff>(outcome));
      }
      js["outcomes"].push_back(std::move(jo));
    }
    j["states"].push_back(std::move(js));
  }
  return j.dump(indent);
}

GameSpec game_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid game JSON: ") + e.what());
  }
  try {
    GameSpec g;
    if (j.contains("schema") && j["schema"].get<int>() != 1) {
      throw DomainError("unsupported game schema version");
    }
    g.name = j.value("name", "unnamed");
    g.attacker_actions = j.at("attacker_actions").get<std::vector<std::string>>();
    for (const auto& js : j.at("states")) {
      StateBranch s;
      s.name = js.at("name").get<std::string>();
      s.probability = js.at("probability").get<double>();
      for (const auto& jo : js.at("outcomes")) {
        if (jo.contains("payoff")) {
          s.outcomes.emplace_back(payoff_from_json(jo["payoff"]));
        } else if (jo.contains("defender_moves")) {
          DefenderNode node;
          for (const auto& jm : jo["defender_moves"]) {
            node.moves.push_back({jm.at("action").get<std::string>(),
                                  payoff_from_json(jm.at("payoff"))});
          }
          s.outcomes.emplace_back(std::move(node));
        } else {
          throw DomainError(
              "outcome needs either 'payoff' or 'defender_moves'");
        }
      }
      g.states.push_back(std::move(s));
    }
    g.validate();
    return g;
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid game JSON: ") + e.what());
  }
}

}  // namespace gamepot::game
