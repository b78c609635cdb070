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

#include <cmath>
#include <random>
#include <set>

#include "gamepot/errors.hpp"
#include "gamepot/game.hpp"
#include "gamepot/solver.hpp"
#include "support/oracle.hpp"

using namespace gamepot;
using namespace gamepot::solver;

namespace {

NormalForm paper_nf() { return to_normal_form(game::builtin_game("paper")); }

// Hand-built bimatrix for elimination fuzzing; no tree behind it.
NormalForm make_bimatrix(const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& d) {
  NormalForm nf;
  nf.attacker = a;
  nf.defender = d;
  for (size_t r = 0; r < a.size(); ++r) {
    nf.row_labels.push_back("r" + std::to_string(r));
  }
  for (size_t c = 0; c < a[0].size(); ++c) {
    nf.col_labels.push_back("c" + std::to_string(c));
  }
  return nf;
}

game::RewardParams random_rewards(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(0.0, 10.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  game::RewardParams p;
  p.value = val(rng);
  p.win = val(rng);
  p.intrinsic = val(rng);
  p.prestige = val(rng);
  p.attack_cost = val(rng);
  p.insight = val(rng);
  p.deception_cost = val(rng);
  p.engagement = val(rng);
  p.breach_cost = val(rng);
  p.p_value = prob(rng);
  p.p_win = prob(rng);
  p.p_intrinsic = prob(rng);
  p.p_prestige = prob(rng);
  p.p_attack_cost = prob(rng);
  p.p_insight = prob(rng);
  p.p_deception_cost = prob(rng);
  p.p_engagement = prob(rng);
  p.p_breach_cost = prob(rng);
  return p;
}

}  // namespace

TEST_CASE("normal form of the built-in game") {
  const NormalForm nf = paper_nf();
  CHECK(nf.rows() == 2);
  CHECK(nf.cols() == 6);
  CHECK(nf.row_labels == std::vector<std::string>{"attack", "resign"});
  CHECK(nf.col_labels ==
        std::vector<std::string>{"allow/allow", "allow/block", "block/allow",
                                 "block/block", "insult/allow",
                                 "insult/block"});
  REQUIRE(nf.nodes.size() == 2);
  CHECK(nf.nodes[0].label == "deceptive");
  CHECK(nf.nodes[1].label == "production");
  CHECK(nf.nodes[0].actions ==
        std::vector<std::string>{"allow", "block", "insult"});
  CHECK(nf.nodes[1].actions == std::vector<std::string>{"allow", "block"});

  // attack row: 0.1*10 + 0.9*(11 or -1); resign row: zero everywhere.
  for (int c = 0; c < 6; ++c) {
    const bool prod_allow = c % 2 == 0;
    CHECK(nf.attacker[0][c] == doctest::Approx(prod_allow ? 10.9 : 0.1));
    CHECK(nf.attacker[1][c] == doctest::Approx(0.0));
    CHECK(nf.defender[0][c] == doctest::Approx(prod_allow ? -6.0 : 0.3));
    CHECK(nf.defender[1][c] == doctest::Approx(0.0));
  }
}

TEST_CASE("normal form handles terminal-only attacker actions") {
  // One state hands a second decision to the defender, the other ends at a
  // terminal for the same attacker action.
  const std::string text = R"({
    "schema": 1, "name": "mixed-family", "attacker_actions": ["strike", "probe"],
    "states": [
      {"name": "deceptive", "probability": 0.5, "outcomes": [
        {"defender_moves": [{"action": "allow", "payoff": [2, 1]},
                             {"action": "block", "payoff": [0, 2]}]},
        {"payoff": [1, 0]}
      ]},
      {"name": "production", "probability": 0.5, "outcomes": [
        {"payoff": [3, -1]},
        {"defender_moves": [{"action": "allow", "payoff": [1, 1]},
                             {"action": "block", "payoff": [-1, 0]}]}
      ]}
    ]})";
  const NormalForm nf = to_normal_form(game::game_from_json(text));
  CHECK(nf.rows() == 2);
  CHECK(nf.cols() == 4);  // two 2-action nodes
  REQUIRE(nf.nodes.size() == 2);
  CHECK(nf.nodes[0].label == "deceptive");
  CHECK(nf.nodes[1].label == "production");
  // strike vs (allow, *): 0.5*2 + 0.5*3
  CHECK(nf.attacker[0][0] == doctest::Approx(2.5));
  // probe vs (*, block): 0.5*1 + 0.5*(-1)
  CHECK(nf.attacker[1][1] == doctest::Approx(0.0));
}

TEST_CASE("elimination trace on the built-in game") {
  const ReducedGame red = iterated_elimination(paper_nf());

  REQUIRE(red.trace.size() == 4);
  CHECK(red.trace[0].iteration == 1);
  CHECK(red.trace[0].player == game::PlayerId::attacker);
  CHECK(red.trace[0].eliminated == "resign");
  CHECK(red.trace[0].dominator == "attack");
  for (size_t i = 1; i < 4; ++i) {
    CHECK(red.trace[i].iteration == 2);
    CHECK(red.trace[i].player == game::PlayerId::defender);
  }
  CHECK(red.trace[1].eliminated == "allow/allow");
  CHECK(red.trace[2].eliminated == "block/allow");
  CHECK(red.trace[3].eliminated == "insult/allow");

  CHECK(red.row_index == std::vector<int>{0});
  CHECK(red.col_index == std::vector<int>{1, 3, 5});
  CHECK(red.game.col_labels ==
        std::vector<std::string>{"allow/block", "block/block", "insult/block"});
}

TEST_CASE("elimination agrees with the sequential-order oracle") {
  std::mt19937_64 rng(20260814);
  std::uniform_int_distribution<int> size(2, 5);
  std::uniform_int_distribution<int> ipay(-5, 5);
  std::uniform_real_distribution<double> fpay(-5.0, 5.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int nr = size(rng);
    const int nc = size(rng);
    std::vector<std::vector<double>> a(nr, std::vector<double>(nc));
    std::vector<std::vector<double>> d(nr, std::vector<double>(nc));
    const bool integral = trial % 2 == 0;  // ties are common with int payoffs
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) {
        a[r][c] = integral ? ipay(rng) : fpay(rng);
        d[r][c] = integral ? ipay(rng) : fpay(rng);
      }
    }
    const ReducedGame red = iterated_elimination(make_bimatrix(a, d));
    const auto [orows, ocols] = oracle::surviving_strict(a, d);
    const std::set<int> srows(red.row_index.begin(), red.row_index.end());
    const std::set<int> scols(red.col_index.begin(), red.col_index.end());
    REQUIRE_MESSAGE(srows == orows, "trial ", trial);
    REQUIRE_MESSAGE(scols == ocols, "trial ", trial);
  }
}

TEST_CASE("logit response at lambda zero is uniform") {
  const NormalForm nf = paper_nf();
  QreOptions opts;
  const QrePoint pt = logit_qre(nf, 0.0, {0.9, 0.1},
                                {0.5, 0.1, 0.1, 0.1, 0.1, 0.1}, opts);
  for (double v : pt.attacker) CHECK(v == doctest::Approx(0.5));
  for (double v : pt.defender) CHECK(v == doctest::Approx(1.0 / 6));
  CHECK(pt.residual <= opts.tolerance);
}

TEST_CASE("logit fixed point satisfies its own equations") {
  const NormalForm nf = paper_nf();
  QreOptions opts;
  const QrePoint pt = logit_qre(nf, 2.5, {0.5, 0.5},
                                std::vector<double>(6, 1.0 / 6), opts);
  // Recompute the response map at the returned point.
  std::vector<double> ua(2, 0.0);
  std::vector<double> ud(6, 0.0);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 6; ++c) ua[r] += nf.attacker[r][c] * pt.defender[c];
  }
  for (int c = 0; c < 6; ++c) {
    for (int r = 0; r < 2; ++r) ud[c] += nf.defender[r][c] * pt.attacker[r];
  }
  auto softmax = [](std::vector<double> u, double lam) {
    double top = -1e300;
    for (double& v : u) {
      v *= lam;
      top = std::max(top, v);
    }
    double sum = 0.0;
    for (double& v : u) {
      v = std::exp(v - top);
      sum += v;
    }
    for (double& v : u) v /= sum;
    return u;
  };
  const auto sp = softmax(ua, 2.5);
  const auto sq = softmax(ud, 2.5);
  for (int r = 0; r < 2; ++r) {
    CHECK(pt.attacker[r] == doctest::Approx(sp[r]).epsilon(1e-8));
  }
  for (int c = 0; c < 6; ++c) {
    CHECK(pt.defender[c] == doctest::Approx(sq[c]).epsilon(1e-8));
  }
}

TEST_CASE("qre homotopy on the built-in game") {
  const NormalForm nf = paper_nf();
  const QreOptions opts;
  const std::vector<QrePoint> path = logit_qre_trace(nf, opts);

  REQUIRE(path.size() == 60);
  CHECK(path.front().lambda == doctest::Approx(0.1));
  CHECK(path.back().lambda == doctest::Approx(100.0));
  for (size_t k = 1; k < path.size(); ++k) {
    CHECK(path[k].lambda > path[k - 1].lambda);
  }

  for (const QrePoint& pt : path) {
    CHECK(pt.residual <= opts.tolerance);
    double sa = 0.0;
    double sd = 0.0;
    for (double v : pt.attacker) sa += v;
    for (double v : pt.defender) sd += v;
    CHECK(sa == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-9));
    // Duplicate columns stay bitwise-identical under the logit map, so the
    // deceptive-state marginal is uniform along the whole path.
    CHECK(pt.defender[0] == pt.defender[2]);
    CHECK(pt.defender[0] == pt.defender[4]);
    CHECK(pt.defender[1] == pt.defender[3]);
    CHECK(pt.defender[1] == pt.defender[5]);
  }

  // Attack probability rises along the path but never reaches 1 at finite
  // lambda; the polish step exists precisely to close that gap.
  CHECK(path.back().attacker[0] > 0.999);
  CHECK(path.back().attacker[0] < 1.0 - 1e-6);
}

TEST_CASE("convergence failure carries lambda and residual") {
  const NormalForm nf = paper_nf();
  QreOptions opts;
  opts.max_iterations = 1;
  opts.tolerance = 1e-16;
  try {
    logit_qre(nf, 3.0, {0.9, 0.1}, std::vector<double>(6, 1.0 / 6), opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.lambda() == doctest::Approx(3.0));
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("qre option validation") {
  QreOptions opts;
  SUBCASE("negative lambda_min") {
    opts.lambda_min = 0.0;
    CHECK_THROWS_AS(logit_qre_trace(paper_nf(), opts), DomainError);
  }
  SUBCASE("reversed schedule") {
    opts.lambda_max = 0.01;
    CHECK_THROWS_AS(logit_qre_trace(paper_nf(), opts), DomainError);
  }
  SUBCASE("damping out of range") {
    opts.damping = 0.0;
    CHECK_THROWS_AS(logit_qre_trace(paper_nf(), opts), DomainError);
  }
  SUBCASE("negative lambda in a single solve") {
    CHECK_THROWS_AS(
        logit_qre(paper_nf(), -1.0, {0.5, 0.5}, std::vector<double>(6, 1.0 / 6)),
        DomainError);
  }
}

TEST_CASE("support solve on the built-in game") {
  const NormalForm nf = paper_nf();

  SUBCASE("the equilibrium support yields exact thirds") {
    StrategyProfile p;
    REQUIRE(solve_support(nf, {0}, {1, 3, 5}, &p));
    CHECK(p.attacker[0] == 1.0);
    CHECK(p.attacker[1] == 0.0);
    CHECK(p.defender[1] == 1.0 / 3.0);
    CHECK(p.defender[3] == 1.0 / 3.0);
    CHECK(p.defender[5] == 1.0 / 3.0);
    CHECK(p.defender[0] == 0.0);
  }

  SUBCASE("an inconsistent support is rejected") {
    StrategyProfile p;
    // Both attacker actions in support demands indifference, but any single
    // column separates them by at least 0.1.
    CHECK_FALSE(solve_support(nf, {0, 1}, {0}, &p));
  }

  SUBCASE("malformed supports throw") {
    StrategyProfile p;
    CHECK_THROWS_AS(solve_support(nf, {}, {0}, &p), DomainError);
    CHECK_THROWS_AS(solve_support(nf, {0}, {6}, &p), DomainError);
    CHECK_THROWS_AS(solve_support(nf, {0}, {3, 1}, &p), DomainError);
  }
}

TEST_CASE("verification") {
  const NormalForm nf = paper_nf();

  SUBCASE("uniform play is far from equilibrium") {
    StrategyProfile p{{0.5, 0.5}, std::vector<double>(6, 1.0 / 6)};
    const Verification v = verify_equilibrium(nf, p, 1e-9);
    CHECK_FALSE(v.ok);
    CHECK(v.attacker_gain > 0.1);
  }

  SUBCASE("profiles that are not distributions throw") {
    CHECK_THROWS_AS(
        verify_equilibrium(nf, {{0.5, 0.4}, std::vector<double>(6, 1.0 / 6)}, 1e-9),
        DomainError);
    CHECK_THROWS_AS(
        verify_equilibrium(nf, {{1.5, -0.5}, std::vector<double>(6, 1.0 / 6)}, 1e-9),
        DomainError);
    CHECK_THROWS_AS(verify_equilibrium(nf, {{1.0}, {1.0}}, 1e-9), DomainError);
  }
}

TEST_CASE("solved built-in game: pure attack, exact uniform decoy mixture") {
  const NormalForm nf = paper_nf();
  const EquilibriumResult r = nash_from_qre(nf);

  CHECK(r.method == "qre-polish");
  CHECK(r.epsilon == 1e-9);
  CHECK(r.path.size() == 60);
  CHECK(r.trace.size() == 4);

  CHECK(r.profile.attacker[0] == 1.0);
  CHECK(r.profile.attacker[1] == 0.0);
  CHECK(r.profile.defender[0] == 0.0);
  CHECK(r.profile.defender[2] == 0.0);
  CHECK(r.profile.defender[4] == 0.0);
  CHECK(r.profile.defender[1] == 1.0 / 3.0);
  CHECK(r.profile.defender[3] == 1.0 / 3.0);
  CHECK(r.profile.defender[5] == 1.0 / 3.0);
  CHECK(r.attacker_gain <= 1e-9);
  CHECK(r.defender_gain <= 1e-9);

  const Verification v = verify_equilibrium(nf, r.profile, 1e-9);
  CHECK(v.ok);

  SUBCASE("behavioral view") {
    const BehavioralStrategy b = to_behavioral(nf, r.profile);
    REQUIRE(b.defender.size() == 2);
    CHECK(b.defender[0].label == "deceptive");
    REQUIRE(b.defender[0].probabilities.size() == 3);
    CHECK(b.defender[0].probabilities[0] == 1.0 / 3.0);
    CHECK(b.defender[0].probabilities[1] == 1.0 / 3.0);
    CHECK(b.defender[0].probabilities[2] == 1.0 / 3.0);
    CHECK(b.defender[1].label == "production");
    CHECK(b.defender[1].probabilities[0] == 0.0);
    CHECK(b.defender[1].probabilities[1] == 1.0);
    CHECK(b.attacker[0] == 1.0);
  }

  SUBCASE("the oracle finds the same equilibrium") {
    const auto found = oracle::equilibria(nf.attacker, nf.defender);
    bool matched = false;
    for (const auto& eq : found) {
      double dist = 0.0;
      for (int i = 0; i < 2; ++i) {
        dist = std::max(dist, std::fabs(eq.row[i] - r.profile.attacker[i]));
      }
      for (int j = 0; j < 6; ++j) {
        dist = std::max(dist, std::fabs(eq.col[j] - r.profile.defender[j]));
      }
      if (dist < 1e-7) matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("solving the reduced game keeps the uniform mixture") {
  const ReducedGame red = iterated_elimination(paper_nf());
  const EquilibriumResult r = nash_from_qre(red.game);
  CHECK(r.profile.attacker[0] == 1.0);
  for (int j = 0; j < 3; ++j) CHECK(r.profile.defender[j] == 1.0 / 3.0);
}

TEST_CASE("random family games solve and verify") {
  std::mt19937_64 rng(77001);
  std::uniform_real_distribution<double> prior(0.05, 0.95);
  QreOptions opts;
  opts.lambda_max = 50.0;
  opts.steps = 30;

  int polished = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const game::RewardParams params = random_rewards(rng);
    const game::BeliefState belief =
        game::BeliefState::from_deceptive(prior(rng));
    const NormalForm nf = to_normal_form(game::build_game(params, belief));

    const std::vector<QrePoint> path = logit_qre_trace(nf, opts);
    for (const QrePoint& pt : path) {
      double sa = 0.0;
      double sd = 0.0;
      for (double v : pt.attacker) {
        CHECK(v >= 0.0);
        sa += v;
      }
      for (double v : pt.defender) {
        CHECK(v >= 0.0);
        sd += v;
      }
      REQUIRE(sa == doctest::Approx(1.0).epsilon(1e-9));
      REQUIRE(sd == doctest::Approx(1.0).epsilon(1e-9));
      REQUIRE(pt.residual <= opts.tolerance);
    }

    const EquilibriumResult r = nash_from_qre(nf, opts, 1e-7);
    const Verification v = verify_equilibrium(nf, r.profile, 1e-7);
    REQUIRE_MESSAGE(v.ok, "trial ", trial, " method ", r.method);
    if (r.method == "qre-polish") ++polished;
  }
  // The polish route should carry the bulk of the load; enumeration is a
  // fallback, not the path of least resistance. (At lambda_max 50 the
  // terminal point resolves supports less sharply than the default 100, so
  // a modest fallback share is expected.)
  CHECK(polished >= 35);
}

TEST_CASE("behavioral view validates its input") {
  const NormalForm nf = paper_nf();
  StrategyProfile bad{{0.7, 0.7}, std::vector<double>(6, 1.0 / 6)};
  CHECK_THROWS_AS(to_behavioral(nf, bad), DomainError);
}
