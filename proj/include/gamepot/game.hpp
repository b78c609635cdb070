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

#ifndef GAMEPOT_GAME_HPP_
#define GAMEPOT_GAME_HPP_

#include <string>
#include <variant>
#include <vector>

namespace gamepot::game {

// ---------------------------------------------------------------------------
// The encounter between an intruder and a machine that may or may not be a
// decoy is modeled as a two-player game with a nature move. Nature picks the
// defender's type (deceptive decoy vs. production system); the attacker cannot
// observe the type and decides whether to attack; the defender, knowing its
// own type, picks a per-command response. Payoffs are subjective expected
// utilities built from the value terms in RewardParams.
// ---------------------------------------------------------------------------

enum class PlayerId { attacker, defender };

enum class WorldState { deceptive, production };

enum class AttackerAction { attack, resign };

/// insult is only legal while WorldState::deceptive.
enum class DefenderAction { allow, block, insult };

const char* to_string(PlayerId p);
const char* to_string(WorldState s);
const char* to_string(AttackerAction a);
const char* to_string(DefenderAction a);
DefenderAction defender_action_from_string(const std::string& name);

/// Two-point distribution over the defender's type. Always normalized.
struct BeliefState {
  double p_deceptive;
  double p_production;

  BeliefState(double deceptive, double production);
  static BeliefState from_deceptive(double p) { return {p, 1.0 - p}; }
};

/// Posterior after observing an action with the given per-state likelihoods.
/// Scale-invariant in the likelihoods. Throws DomainError when the total
/// evidence is zero (the caller decides the fallback).
BeliefState bayes_update(const BeliefState& prior, double likelihood_deceptive,
                         double likelihood_production);

/// Every subjective-expected-utility input: a value paired with the
/// probability the owner assigns to realizing it. Utility units are abstract.
struct RewardParams {
  // Attacker.
  double value = 0.0;            // V: information or access gained
  double p_value = 0.0;
  double win = 0.0;              // W: satisfaction of reaching the goal
  double p_win = 0.0;
  double intrinsic = 0.0;        // S: exploration / competition enjoyment
  double p_intrinsic = 0.0;
  double prestige = 0.0;         // standing among peers
  double p_prestige = 0.0;
  double attack_cost = 0.0;      // time and resources spent attacking
  double p_attack_cost = 0.0;

  // Deceptive defender.
  double insight = 0.0;          // I: observed attacker behavior
  double p_insight = 0.0;
  double deception_cost = 0.0;   // implausible behavior deterring attackers
  double p_deception_cost = 0.0;
  double engagement = 0.0;       // E: offset for keeping the attacker engaged
  double p_engagement = 0.0;

  // Production defender.
  double breach_cost = 0.0;      // cost of a successful breach
  double p_breach_cost = 0.0;

  /// Throws DomainError unless all probabilities lie in [0,1] and all
  /// magnitudes are finite.
  void validate() const;
};

/// p(V)V + p(W)W + p(S)S + p(Prestige)Prestige − p(C)C. Callers zero the
/// terms that a given outcome cannot realize (a decoy yields no V or W).
double seu_attacker(const RewardParams& params);

/// p(I)I − (p(C)C − p(E)E).
double seu_defender_deceptive(const RewardParams& params);

/// −p(C)C. Zero when the breach is prevented or never attempted; the caller
/// passes p(C) (or C) accordingly.
double seu_defender_production(const RewardParams& params);

// ---------------------------------------------------------------------------
// Per-outcome term activation. Which SEU terms are live at which terminal is
// configuration data, kept in one table rather than scattered through the
// tree construction. default_outcome_table() documents the shipped choice.
// ---------------------------------------------------------------------------

struct AttackerTerms {
  bool value = false;
  bool win = false;
  bool intrinsic = false;
  bool prestige = false;
  bool attack_cost = false;
};

struct DefenderTerms {
  bool insight = false;
  bool deception_cost = false;
  bool engagement = false;
  bool breach_cost = false;
};

struct OutcomeTerms {
  AttackerTerms attacker;
  DefenderTerms defender;
};

/// One row per terminal of the tree.
struct OutcomeTable {
  OutcomeTerms deceptive_attack_allow;
  OutcomeTerms deceptive_attack_block;
  OutcomeTerms deceptive_attack_insult;
  OutcomeTerms deceptive_resign;
  OutcomeTerms production_attack_allow;
  OutcomeTerms production_attack_block;
  OutcomeTerms production_resign;
};

/// Shipped activation table:
///   deceptive, attack+allow:  attacker {S, Prestige, −C};  defender {I}
///   deceptive, attack+block:  attacker {S, Prestige, −C};  defender {E}
///   deceptive, attack+insult: attacker {S, Prestige, −C};  defender {I, E, −C}
///   production, attack+allow: attacker {V, W, −C};         defender {−C}
///   production, attack+block: attacker {−C};               defender {}
///   resign (either state):    nothing on either side
/// Rationale: a decoy yields no V or W; allowing a command observes real
/// behavior (insight); blocking provokes retries and alternatives
/// (engagement); insulting provokes identifying replies (insight) and engages,
/// at an implausibility cost; a blocked production command prevents the
/// breach; resigning evades all costs and forfeits all gains.
OutcomeTable default_outcome_table();

/// Copy of params with every value whose term is inactive zeroed out.
RewardParams apply_terms(const RewardParams& params, const AttackerTerms& a,
                         const DefenderTerms& d);

// ---------------------------------------------------------------------------
// Extensive form. The tree family is fixed: nature → two states; one attacker
// information set spanning both states (identical action list); per attacker
// action either a terminal or a defender node whose legal actions may differ
// by state.
// ---------------------------------------------------------------------------

struct TerminalPayoff {
  double attacker = 0.0;
  double defender = 0.0;
};

struct DefenderMove {
  std::string action;
  TerminalPayoff payoff;
};

struct DefenderNode {
  std::vector<DefenderMove> moves;
};

using AttackerOutcome = std::variant<TerminalPayoff, DefenderNode>;

struct StateBranch {
  std::string name;
  double probability = 0.0;
  std::vector<AttackerOutcome> outcomes;  // parallel to GameSpec::attacker_actions
};

struct GameSpec {
  std::string name;
  std::vector<std::string> attacker_actions;
  std::vector<StateBranch> states;

  /// Structural checks: exactly two states, nature probabilities sum to 1,
  /// outcome lists parallel to the shared attacker action list, no "insult"
  /// under a state named "production". Throws DomainError.
  void validate() const;

  int terminal_count() const;
  /// Nodes in the attacker's information set (one per state).
  int info_set_size() const;
};

/// Builds the two-state deception game: prior on the root nature move,
/// terminal payoffs evaluated through the SEU functions under the activation
/// table.
GameSpec build_game(const RewardParams& params, const BeliefState& prior,
                    const OutcomeTable& table = default_outcome_table());

/// The parameterization shipped with the project. Integer values, unit
/// subjective probabilities; chosen by grid search so the solved game has a
/// pure attack strategy and an exactly uniform deceptive-defender mixture.
/// Illustrative, not calibrated measurements.
RewardParams reconstructed_reward_fixture();

/// Attacker prior: 10% deceptive, 90% production.
BeliefState default_prior();

/// Named built-in games for the solver CLI. "paper" is the game built from
/// reconstructed_reward_fixture() and default_prior(). Throws DomainError for
/// unknown names.
GameSpec builtin_game(const std::string& name);

/// JSON round-trip (schema documented in docs/game-schema.md).
std::string game_to_json(const GameSpec& game, int indent = 2);
GameSpec game_from_json(const std::string& text);

}  // namespace gamepot::game

#endif  // GAMEPOT_GAME_HPP_
