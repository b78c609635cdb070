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

#ifndef GAMEPOT_SOLVER_HPP_
#define GAMEPOT_SOLVER_HPP_

#include <string>
#include <vector>

#include "gamepot/game.hpp"

namespace gamepot::solver {

// ---------------------------------------------------------------------------
// Induced normal form. Attacker pure strategies are the shared action list.
// A defender pure strategy assigns one action to every node where the
// defender moves, so the column set is the cross product over nodes (last
// node varies fastest). Column labels join the choices with '/'.
// ---------------------------------------------------------------------------

struct DefenderNodeInfo {
  std::string state;            // owning state name
  std::string attacker_action;  // action leading into the node
  std::string label;            // state name, or "state/action" if ambiguous
  std::vector<std::string> actions;
};

struct NormalForm {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<DefenderNodeInfo> nodes;
  // col_choices[c][n] indexes nodes[n].actions.
  std::vector<std::vector<int>> col_choices;
  // attacker[r][c], defender[r][c]: expected payoffs over the nature move.
  std::vector<std::vector<double>> attacker;
  std::vector<std::vector<double>> defender;

  int rows() const { return static_cast<int>(row_labels.size()); }
  int cols() const { return static_cast<int>(col_labels.size()); }
};

NormalForm to_normal_form(const game::GameSpec& g);

// ---------------------------------------------------------------------------
// Iterated elimination of strictly dominated strategies. Pure-strategy
// dominators only. Within an iteration, dominance is judged against the sets
// that survived the previous iteration, and all strategies found dominated
// are removed together; the pass repeats until nothing changes. For strict
// dominance the surviving sets do not depend on this ordering policy.
// ---------------------------------------------------------------------------

struct Elimination {
  int iteration = 0;  // 1-based
  game::PlayerId player = game::PlayerId::attacker;
  std::string eliminated;
  std::string dominator;
};

struct ReducedGame {
  NormalForm game;
  std::vector<int> row_index;  // surviving row -> original row
  std::vector<int> col_index;
  std::vector<Elimination> trace;
};

ReducedGame iterated_elimination(const NormalForm& g);

// ---------------------------------------------------------------------------
// Logit quantal response. A fixed point of
//   p = softmax(lambda * A q),   q = softmax(lambda * D^T p)
// is reached by damped iteration; the residual is the sup-norm distance
// between the profile and its undamped image. The damping factor shrinks
// automatically when progress stalls.
// ---------------------------------------------------------------------------

struct QreOptions {
  double lambda_min = 0.1;
  double lambda_max = 100.0;
  int steps = 60;           // geometric schedule, endpoints included
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 10000;  // per lambda
  double support_cutoff = 1e-4;

  void validate() const;
};

struct QrePoint {
  double lambda = 0.0;
  std::vector<double> attacker;
  std::vector<double> defender;
  double residual = 0.0;
  int iterations = 0;
};

/// Fixed point at one lambda from a warm start. lambda = 0 is legal and
/// yields the uniform profile. Throws ConvergenceError when the residual
/// fails to reach opts.tolerance within opts.max_iterations.
QrePoint logit_qre(const NormalForm& g, double lambda,
                   const std::vector<double>& warm_attacker,
                   const std::vector<double>& warm_defender,
                   const QreOptions& opts = {});

/// Homotopy path: uniform start, geometric lambda schedule, each point
/// warm-started from the previous one.
std::vector<QrePoint> logit_qre_trace(const NormalForm& g,
                                      const QreOptions& opts = {});

// ---------------------------------------------------------------------------
// Equilibrium extraction.
// ---------------------------------------------------------------------------

struct StrategyProfile {
  std::vector<double> attacker;
  std::vector<double> defender;
};

struct Verification {
  bool ok = false;
  double attacker_gain = 0.0;  // best unilateral pure-deviation improvement
  double defender_gain = 0.0;
};

/// Checks the profile against every pure deviation. gains <= epsilon passes.
/// Throws DomainError when the profile is not a pair of distributions
/// (length mismatch, negative mass, or sums off by more than 1e-9).
Verification verify_equilibrium(const NormalForm& g, const StrategyProfile& p,
                                double epsilon);

/// Exact equilibrium on a guessed support pair: indifference conditions are
/// solved by Gaussian elimination; duplicate strategies inside a support
/// share their class weight equally (the symmetric limit point), which keeps
/// mixtures like thirds exact in floating point. Returns false when the
/// system is inconsistent or needs negative probabilities.
bool solve_support(const NormalForm& g, const std::vector<int>& rows,
                   const std::vector<int>& cols, StrategyProfile* out);

struct EquilibriumResult {
  StrategyProfile profile;
  std::string method;  // "qre-polish" or "support-enumeration"
  std::vector<Elimination> trace;
  std::vector<QrePoint> path;
  double epsilon = 0.0;
  double attacker_gain = 0.0;
  double defender_gain = 0.0;
};

/// End-to-end solve: dominance trace for reporting, QRE homotopy to
/// opts.lambda_max, support detection at the terminal point, exact polish,
/// verification at epsilon. If the polished profile fails to verify, falls
/// back to enumerating support pairs (QRE-adjacent supports first). Throws
/// ConvergenceError when no verified equilibrium is found.
EquilibriumResult nash_from_qre(const NormalForm& g, const QreOptions& opts = {},
                                double epsilon = 1e-9);

// ---------------------------------------------------------------------------
// Behavioral view: per-node defender marginals implied by a mixed strategy
// over columns, plus the attacker mixture unchanged.
// ---------------------------------------------------------------------------

struct NodeMarginal {
  std::string label;
  std::vector<std::string> actions;
  std::vector<double> probabilities;
};

struct BehavioralStrategy {
  std::vector<double> attacker;
  std::vector<NodeMarginal> defender;
};

BehavioralStrategy to_behavioral(const NormalForm& g,
                                 const StrategyProfile& p);

}  // namespace gamepot::solver

#endif  // GAMEPOT_SOLVER_HPP_
