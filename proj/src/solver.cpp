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

#include "gamepot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "gamepot/errors.hpp"

namespace gamepot::solver {

namespace {

constexpr double kDuplicateTol = 1e-9;     // payoff-identity test for classes
constexpr double kSystemResidualTol = 1e-8;
constexpr double kRidge = 1e-10;

std::vector<double> uniform_vector(int n) {
  return std::vector<double>(static_cast<size_t>(n), 1.0 / n);
}

// softmax(scale * u), max-subtracted for stability. Equal inputs produce
// bitwise-equal outputs, which keeps symmetric mixtures symmetric.
std::vector<double> softmax_scaled(const std::vector<double>& u, double scale) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : u) top = std::max(top, scale * v);
  std::vector<double> out(u.size());
  double sum = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    out[i] = std::exp(scale * u[i] - top);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

// Row payoffs against a column mixture: (M q)_r.
std::vector<double> row_payoffs(const std::vector<std::vector<double>>& m,
                                const std::vector<double>& q) {
  std::vector<double> out(m.size(), 0.0);
  for (size_t r = 0; r < m.size(); ++r) {
    for (size_t c = 0; c < q.size(); ++c) out[r] += m[r][c] * q[c];
  }
  return out;
}

// Column payoffs against a row mixture: (M^T p)_c.
std::vector<double> col_payoffs(const std::vector<std::vector<double>>& m,
                                const std::vector<double>& p) {
  if (m.empty()) return {};
  std::vector<double> out(m[0].size(), 0.0);
  for (size_t r = 0; r < m.size(); ++r) {
    for (size_t c = 0; c < out.size(); ++c) out[c] += m[r][c] * p[r];
  }
  return out;
}

// Gaussian elimination with partial pivoting. Returns false on a singular
// pivot; the caller falls back to the regularized route.
bool gaussian_solve(std::vector<std::vector<double>> m, std::vector<double> b,
                    std::vector<double>* y) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int r = k + 1; r < n; ++r) {
      if (std::fabs(m[r][k]) > std::fabs(m[pivot][k])) pivot = r;
    }
    if (std::fabs(m[pivot][k]) < 1e-12) return false;
    std::swap(m[k], m[pivot]);
    std::swap(b[k], b[pivot]);
    for (int r = k + 1; r < n; ++r) {
      const double f = m[r][k] / m[k][k];
      if (f == 0.0) continue;
      for (int c = k; c < n; ++c) m[r][c] -= f * m[k][c];
      b[r] -= f * b[k];
    }
  }
  y->assign(static_cast<size_t>(n), 0.0);
  for (int k = n - 1; k >= 0; --k) {
    double acc = b[k];
    for (int c = k + 1; c < n; ++c) acc -= m[k][c] * (*y)[c];
    (*y)[k] = acc / m[k][k];
  }
  return true;
}

// Solves M y = b. Square nonsingular systems go through plain elimination;
// everything else is regularized toward `bias` (ridge on the normal
// equations), which picks the solution closest to the warm point on
// indifference continua. Returns false when even the regularized solution
// does not satisfy the system.
bool solve_linear_system(const std::vector<std::vector<double>>& m,
                         const std::vector<double>& b,
                         const std::vector<double>& bias,
                         std::vector<double>* y) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  if (cols == 0) return false;

  bool solved = false;
  if (rows == cols) solved = gaussian_solve(m, b, y);
  if (!solved) {
    // (M^T M + mu I) y = M^T b + mu * bias
    std::vector<std::vector<double>> g(
        static_cast<size_t>(cols), std::vector<double>(static_cast<size_t>(cols), 0.0));
    std::vector<double> rhs(static_cast<size_t>(cols), 0.0);
    for (int i = 0; i < cols; ++i) {
      for (int j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (int r = 0; r < rows; ++r) acc += m[r][i] * m[r][j];
        g[i][j] = acc;
      }
      g[i][i] += kRidge;
      double acc = 0.0;
      for (int r = 0; r < rows; ++r) acc += m[r][i] * b[r];
      rhs[i] = acc + kRidge * bias[i];
    }
    if (!gaussian_solve(g, rhs, y)) return false;
  }

  for (int r = 0; r < rows; ++r) {
    double acc = -b[r];
    for (int c = 0; c < cols; ++c) acc += m[r][c] * (*y)[c];
    if (std::fabs(acc) > kSystemResidualTol) return false;
  }
  return true;
}

// Newton corrector for the logit fixed point, run in score space where the
// iterates are unconstrained: with p = softmax(a), q = softmax(b) solve
//   a = lambda * A softmax(b),   b = lambda * D^T softmax(a).
// The damped map cannot converge when the underlying response flow orbits the
// fixed point (Shapley-style cycles make it repelling); Newton does not care
// about flow stability. Returns true and fills p/q on success.
bool newton_qre(const NormalForm& g, double lambda, std::vector<double>* p,
                std::vector<double>* q, const QreOptions& opts,
                double* residual_out) {
  const int m = g.rows();
  const int n = g.cols();
  std::vector<double> a(static_cast<size_t>(m));
  std::vector<double> b(static_cast<size_t>(n));
  const std::vector<double> ua = row_payoffs(g.attacker, *q);
  const std::vector<double> ub = col_payoffs(g.defender, *p);
  for (int i = 0; i < m; ++i) a[static_cast<size_t>(i)] = lambda * ua[static_cast<size_t>(i)];
  for (int j = 0; j < n; ++j) b[static_cast<size_t>(j)] = lambda * ub[static_cast<size_t>(j)];

  auto residual_g = [&](const std::vector<double>& av,
                        const std::vector<double>& bv,
                        std::vector<double>* gv) {
    const std::vector<double> sa = softmax_scaled(av, 1.0);
    const std::vector<double> sb = softmax_scaled(bv, 1.0);
    const std::vector<double> ra = row_payoffs(g.attacker, sb);
    const std::vector<double> rb = col_payoffs(g.defender, sa);
    gv->assign(static_cast<size_t>(m + n), 0.0);
    double norm = 0.0;
    for (int i = 0; i < m; ++i) {
      (*gv)[static_cast<size_t>(i)] = av[static_cast<size_t>(i)] - lambda * ra[static_cast<size_t>(i)];
      norm = std::max(norm, std::fabs((*gv)[static_cast<size_t>(i)]));
    }
    for (int j = 0; j < n; ++j) {
      (*gv)[static_cast<size_t>(m + j)] = bv[static_cast<size_t>(j)] - lambda * rb[static_cast<size_t>(j)];
      norm = std::max(norm, std::fabs((*gv)[static_cast<size_t>(m + j)]));
    }
    return norm;
  };

  std::vector<double> gvec;
  double gnorm = residual_g(a, b, &gvec);
  for (int it = 0; it < 80; ++it) {
    const std::vector<double> sa = softmax_scaled(a, 1.0);
    const std::vector<double> sb = softmax_scaled(b, 1.0);

    // Probability-space residual decides success.
    std::vector<double> pa = softmax_scaled(row_payoffs(g.attacker, sb), lambda);
    std::vector<double> qb = softmax_scaled(col_payoffs(g.defender, sa), lambda);
    double rp = 0.0;
    for (int i = 0; i < m; ++i) rp = std::max(rp, std::fabs(sa[static_cast<size_t>(i)] - pa[static_cast<size_t>(i)]));
    for (int j = 0; j < n; ++j) rp = std::max(rp, std::fabs(sb[static_cast<size_t>(j)] - qb[static_cast<size_t>(j)]));
    if (rp <= opts.tolerance) {
      *p = sa;
      *q = sb;
      *residual_out = rp;
      return true;
    }

    // J = [[I, -lambda*A*Jsoft(b)], [-lambda*D^T*Jsoft(a), I]]
    std::vector<std::vector<double>> jac(
        static_cast<size_t>(m + n), std::vector<double>(static_cast<size_t>(m + n), 0.0));
    for (int i = 0; i < m + n; ++i) jac[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          const double jsoft = sb[static_cast<size_t>(j)] * ((j == k ? 1.0 : 0.0) - sb[static_cast<size_t>(k)]);
          acc += g.attacker[static_cast<size_t>(i)][static_cast<size_t>(j)] * jsoft;
        }
        jac[static_cast<size_t>(i)][static_cast<size_t>(m + k)] = -lambda * acc;
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
          const double jsoft = sa[static_cast<size_t>(i)] * ((i == k ? 1.0 : 0.0) - sa[static_cast<size_t>(k)]);
          acc += g.defender[static_cast<size_t>(i)][static_cast<size_t>(j)] * jsoft;
        }
        jac[static_cast<size_t>(m + j)][static_cast<size_t>(k)] = -lambda * acc;
      }
    }

    std::vector<double> rhs(static_cast<size_t>(m + n));
    for (int i = 0; i < m + n; ++i) rhs[static_cast<size_t>(i)] = -gvec[static_cast<size_t>(i)];
    std::vector<double> step;
    if (!gaussian_solve(jac, rhs, &step)) return false;

    // Backtracking on the score residual.
    bool accepted = false;
    for (double t = 1.0; t >= 1.0 / 64; t *= 0.5) {
      std::vector<double> at = a;
      std::vector<double> bt = b;
      for (int i = 0; i < m; ++i) at[static_cast<size_t>(i)] += t * step[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j) bt[static_cast<size_t>(j)] += t * step[static_cast<size_t>(m + j)];
      std::vector<double> gt;
      const double nt = residual_g(at, bt, &gt);
      if (nt < gnorm * (1.0 - 0.25 * t) || nt < opts.tolerance * 0.5) {
        a = std::move(at);
        b = std::move(bt);
        gvec = std::move(gt);
        gnorm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return false;
  }
  return false;
}

void check_sorted_support(const std::vector<int>& s, int limit,
                          const char* what) {
  if (s.empty()) throw DomainError(std::string(what) + " support is empty");
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= limit) {
      throw DomainError(std::string(what) + " support index out of range");
    }
    if (i > 0 && s[i] <= s[i - 1]) {
      throw DomainError(std::string(what) +
                        " support must be strictly increasing");
    }
  }
}

// Partitions `support` into classes of strategies whose payoff entries (in
// both matrices, restricted to `opponent`) coincide within kDuplicateTol.
// Splitting a class's weight equally never disturbs either player's
// incentives.
std::vector<std::vector<int>> duplicate_classes(
    const NormalForm& g, const std::vector<int>& support,
    const std::vector<int>& opponent, bool support_is_cols) {
  std::vector<std::vector<int>> classes;
  for (int s : support) {
    bool placed = false;
    for (auto& cls : classes) {
      const int t = cls.front();
      bool same = true;
      for (int o : opponent) {
        const double a1 = support_is_cols ? g.attacker[o][s] : g.attacker[s][o];
        const double a2 = support_is_cols ? g.attacker[o][t] : g.attacker[t][o];
        const double d1 = support_is_cols ? g.defender[o][s] : g.defender[s][o];
        const double d2 = support_is_cols ? g.defender[o][t] : g.defender[t][o];
        if (std::fabs(a1 - a2) > kDuplicateTol ||
            std::fabs(d1 - d2) > kDuplicateTol) {
          same = false;
          break;
        }
      }
      if (same) {
        cls.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({s});
  }
  return classes;
}

// Finds a mixture over `support` (columns when support_is_cols) that makes
// the opponent indifferent across `opponent`. Duplicate classes share weight
// equally: a single-class support becomes exactly 1/|support| per member.
bool mix_for_indifference(const NormalForm& g, const std::vector<int>& support,
                          const std::vector<int>& opponent,
                          bool support_is_cols, std::vector<double>* full) {
  const auto classes = duplicate_classes(g, support, opponent, support_is_cols);
  const int k = static_cast<int>(classes.size());

  // Unknowns: total weight per class. Rows: opponent indifference against the
  // first opponent strategy, then the simplex constraint.
  std::vector<std::vector<double>> m;
  std::vector<double> b;
  // The indifferent payoff matrix is the OPPONENT's own payoff: the attacker
  // is indifferent across rows based on `attacker`, the defender across
  // columns based on `defender`.
  const auto& pay = support_is_cols ? g.attacker : g.defender;
  for (size_t oi = 1; oi < opponent.size(); ++oi) {
    std::vector<double> row(static_cast<size_t>(k), 0.0);
    for (int ci = 0; ci < k; ++ci) {
      for (int s : classes[ci]) {
        const double cur = support_is_cols ? pay[opponent[oi]][s]
                                           : pay[s][opponent[oi]];
        const double ref = support_is_cols ? pay[opponent[0]][s]
                                           : pay[s][opponent[0]];
        row[static_cast<size_t>(ci)] += (cur - ref) / classes[ci].size();
      }
    }
    m.push_back(std::move(row));
    b.push_back(0.0);
  }
  m.emplace_back(static_cast<size_t>(k), 1.0);
  b.push_back(1.0);

  std::vector<double> y;
  if (!solve_linear_system(m, b, uniform_vector(k), &y)) return false;

  const int n = support_is_cols ? g.cols() : g.rows();
  full->assign(static_cast<size_t>(n), 0.0);
  double total = 0.0;
  for (int ci = 0; ci < k; ++ci) {
    const double share = y[static_cast<size_t>(ci)] / classes[ci].size();
    if (share < -1e-12) return false;
    for (int s : classes[ci]) {
      (*full)[static_cast<size_t>(s)] = std::max(share, 0.0);
      total += (*full)[static_cast<size_t>(s)];
    }
  }
  // Renormalizing would perturb exact shares like 1/3, so only do it when the
  // solve left real drift.
  if (std::fabs(total - 1.0) > 1e-9) {
    if (total <= 0.0) return false;
    for (double& v : *full) v /= total;
  }
  return true;
}

void validate_profile(const NormalForm& g, const StrategyProfile& p) {
  if (static_cast<int>(p.attacker.size()) != g.rows() ||
      static_cast<int>(p.defender.size()) != g.cols()) {
    throw DomainError("profile dimensions do not match the game");
  }
  for (const auto* v : {&p.attacker, &p.defender}) {
    double sum = 0.0;
    for (double x : *v) {
      if (x < -1e-12 || !std::isfinite(x)) {
        throw DomainError("profile has negative or non-finite mass");
      }
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw DomainError("profile mass does not sum to 1");
    }
  }
}

}  // namespace

NormalForm to_normal_form(const game::GameSpec& g) {
  g.validate();
  NormalForm nf;
  nf.row_labels = g.attacker_actions;

  // Node discovery in (state, attacker action) order.
  std::map<std::pair<int, int>, int> node_at;  // (state, action) -> node idx
  std::vector<int> per_state_count(g.states.size(), 0);
  for (size_t s = 0; s < g.states.size(); ++s) {
    for (size_t a = 0; a < g.states[s].outcomes.size(); ++a) {
      if (const auto* node =
              std::get_if<game::DefenderNode>(&g.states[s].outcomes[a])) {
        DefenderNodeInfo info;
        info.state = g.states[s].name;
        info.attacker_action = g.attacker_actions[a];
        for (const auto& mv : node->moves) info.actions.push_back(mv.action);
        node_at[{static_cast<int>(s), static_cast<int>(a)}] =
            static_cast<int>(nf.nodes.size());
        nf.nodes.push_back(std::move(info));
        ++per_state_count[s];
      }
    }
  }
  for (auto& [key, idx] : node_at) {
    auto& info = nf.nodes[static_cast<size_t>(idx)];
    info.label = per_state_count[static_cast<size_t>(key.first)] == 1
                     ? info.state
                     : info.state + "/" + info.attacker_action;
  }

  // Cross product of node choices, last node varying fastest.
  std::vector<int> counter(nf.nodes.size(), 0);
  while (true) {
    nf.col_choices.push_back(counter);
    std::string label;
    for (size_t n = 0; n < nf.nodes.size(); ++n) {
      if (!label.empty()) label += "/";
      label += nf.nodes[n].actions[static_cast<size_t>(counter[n])];
    }
    if (label.empty()) label = "(none)";
    nf.col_labels.push_back(std::move(label));

    int n = static_cast<int>(nf.nodes.size()) - 1;
    while (n >= 0) {
      if (++counter[static_cast<size_t>(n)] <
          static_cast<int>(nf.nodes[static_cast<size_t>(n)].actions.size())) {
        break;
      }
      counter[static_cast<size_t>(n)] = 0;
      --n;
    }
    if (n < 0) break;
  }

  const int rows = static_cast<int>(nf.row_labels.size());
  const int cols = static_cast<int>(nf.col_labels.size());
  nf.attacker.assign(static_cast<size_t>(rows),
                     std::vector<double>(static_cast<size_t>(cols), 0.0));
  nf.defender = nf.attacker;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double ua = 0.0;
      double ud = 0.0;
      for (size_t s = 0; s < g.states.size(); ++s) {
        const auto& outcome = g.states[s].outcomes[static_cast<size_t>(r)];
        game::TerminalPayoff leaf;
        if (const auto* node = std::get_if<game::DefenderNode>(&outcome)) {
          const int ni = node_at.at({static_cast<int>(s), r});
          const int choice =
              nf.col_choices[static_cast<size_t>(c)][static_cast<size_t>(ni)];
          leaf = node->moves[static_cast<size_t>(choice)].payoff;
        } else {
          leaf = std::get<game::TerminalPayoff>(outcome);
        }
        ua += g.states[s].probability * leaf.attacker;
        ud += g.states[s].probability * leaf.defender;
      }
      nf.attacker[static_cast<size_t>(r)][static_cast<size_t>(c)] = ua;
      nf.defender[static_cast<size_t>(r)][static_cast<size_t>(c)] = ud;
    }
  }
  return nf;
}

ReducedGame iterated_elimination(const NormalForm& g) {
  std::vector<bool> row_alive(static_cast<size_t>(g.rows()), true);
  std::vector<bool> col_alive(static_cast<size_t>(g.cols()), true);
  std::vector<Elimination> trace;

  // Strict dominance of `victim` by `candidate` against every live opponent
  // strategy. Judged on the sets as of the start of the iteration, so all
  // removals within an iteration are simultaneous.
  auto row_dominated = [&](int victim, int candidate) {
    for (int c = 0; c < g.cols(); ++c) {
      if (!col_alive[static_cast<size_t>(c)]) continue;
      if (!(g.attacker[static_cast<size_t>(candidate)][static_cast<size_t>(c)] >
            g.attacker[static_cast<size_t>(victim)][static_cast<size_t>(c)])) {
        return false;
      }
    }
    return true;
  };
  auto col_dominated = [&](int victim, int candidate) {
    for (int r = 0; r < g.rows(); ++r) {
      if (!row_alive[static_cast<size_t>(r)]) continue;
      if (!(g.defender[static_cast<size_t>(r)][static_cast<size_t>(candidate)] >
            g.defender[static_cast<size_t>(r)][static_cast<size_t>(victim)])) {
        return false;
      }
    }
    return true;
  };

  for (int iteration = 1;; ++iteration) {
    std::vector<std::pair<int, int>> dead_rows;  // victim, dominator
    std::vector<std::pair<int, int>> dead_cols;
    for (int v = 0; v < g.rows(); ++v) {
      if (!row_alive[static_cast<size_t>(v)]) continue;
      for (int d = 0; d < g.rows(); ++d) {
        if (d == v || !row_alive[static_cast<size_t>(d)]) continue;
        if (row_dominated(v, d)) {
          dead_rows.emplace_back(v, d);
          break;
        }
      }
    }
    for (int v = 0; v < g.cols(); ++v) {
      if (!col_alive[static_cast<size_t>(v)]) continue;
      for (int d = 0; d < g.cols(); ++d) {
        if (d == v || !col_alive[static_cast<size_t>(d)]) continue;
        if (col_dominated(v, d)) {
          dead_cols.emplace_back(v, d);
          break;
        }
      }
    }
    if (dead_rows.empty() && dead_cols.empty()) break;
    for (auto [v, d] : dead_rows) {
      row_alive[static_cast<size_t>(v)] = false;
      trace.push_back({iteration, game::PlayerId::attacker,
                       g.row_labels[static_cast<size_t>(v)],
                       g.row_labels[static_cast<size_t>(d)]});
    }
    for (auto [v, d] : dead_cols) {
      col_alive[static_cast<size_t>(v)] = false;
      trace.push_back({iteration, game::PlayerId::defender,
                       g.col_labels[static_cast<size_t>(v)],
                       g.col_labels[static_cast<size_t>(d)]});
    }
  }

  ReducedGame out;
  out.trace = std::move(trace);
  for (int r = 0; r < g.rows(); ++r) {
    if (row_alive[static_cast<size_t>(r)]) out.row_index.push_back(r);
  }
  for (int c = 0; c < g.cols(); ++c) {
    if (col_alive[static_cast<size_t>(c)]) out.col_index.push_back(c);
  }
  out.game.nodes = g.nodes;
  for (int r : out.row_index) {
    out.game.row_labels.push_back(g.row_labels[static_cast<size_t>(r)]);
  }
  // Hand-built matrices may carry no tree metadata; keep whatever is there.
  const bool has_choices = g.col_choices.size() == g.col_labels.size();
  for (int c : out.col_index) {
    out.game.col_labels.push_back(g.col_labels[static_cast<size_t>(c)]);
    if (has_choices) {
      out.game.col_choices.push_back(g.col_choices[static_cast<size_t>(c)]);
    }
  }
  for (int r : out.row_index) {
    std::vector<double> ra;
    std::vector<double> rd;
    for (int c : out.col_index) {
      ra.push_back(g.attacker[static_cast<size_t>(r)][static_cast<size_t>(c)]);
      rd.push_back(g.defender[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    }
    out.game.attacker.push_back(std::move(ra));
    out.game.defender.push_back(std::move(rd));
  }
  return out;
}

void QreOptions::validate() const {
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_min)) {
    throw DomainError("lambda_min must be positive");
  }
  if (!(lambda_max >= lambda_min) || !std::isfinite(lambda_max)) {
    throw DomainError("lambda_max must be at least lambda_min");
  }
  if (steps < 1) throw DomainError("steps must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw DomainError("damping must lie in (0,1]");
  }
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be positive");
  if (!(support_cutoff > 0.0 && support_cutoff < 0.5)) {
    throw DomainError("support_cutoff must lie in (0, 0.5)");
  }
}

QrePoint logit_qre(const NormalForm& g, double lambda,
                   const std::vector<double>& warm_attacker,
                   const std::vector<double>& warm_defender,
                   const QreOptions& opts) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be finite and non-negative");
  }
  if (static_cast<int>(warm_attacker.size()) != g.rows() ||
      static_cast<int>(warm_defender.size()) != g.cols()) {
    throw DomainError("warm start dimensions do not match the game");
  }

  std::vector<double> p = warm_attacker;
  std::vector<double> q = warm_defender;
  double damping = opts.damping;
  double best_residual = std::numeric_limits<double>::infinity();
  int since_progress = 0;
  double residual = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const std::vector<double> tp = softmax_scaled(row_payoffs(g.attacker, q), lambda);
    const std::vector<double> tq = softmax_scaled(col_payoffs(g.defender, p), lambda);
    residual = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      residual = std::max(residual, std::fabs(p[i] - tp[i]));
    }
    for (size_t j = 0; j < q.size(); ++j) {
      residual = std::max(residual, std::fabs(q[j] - tq[j]));
    }
    if (residual <= opts.tolerance) {
      return {lambda, std::move(p), std::move(q), residual, it};
    }
    if (residual < best_residual * 0.999) {
      best_residual = residual;
      since_progress = 0;
    } else if (++since_progress >= 150) {
      // Oscillation around the fixed point. Smaller steps stabilize points
      // that are merely stiff; points the response flow orbits (Shapley-style
      // cycles) stay repelling at any step size, so once the step has shrunk
      // a few times hand over to the Newton corrector.
      damping = std::max(damping * 0.5, 1e-5);
      since_progress = 0;
      if (damping <= opts.damping * 0.26) {
        double rescued = residual;
        if (newton_qre(g, lambda, &p, &q, opts, &rescued)) {
          return {lambda, std::move(p), std::move(q), rescued, it};
        }
      }
    }
    for (size_t i = 0; i < p.size(); ++i) {
      p[i] = (1.0 - damping) * p[i] + damping * tp[i];
    }
    for (size_t j = 0; j < q.size(); ++j) {
      q[j] = (1.0 - damping) * q[j] + damping * tq[j];
    }
  }
  throw ConvergenceError(lambda, residual);
}

std::vector<QrePoint> logit_qre_trace(const NormalForm& g,
                                      const QreOptions& opts) {
  opts.validate();
  std::vector<double> p = uniform_vector(g.rows());
  std::vector<double> q = uniform_vector(g.cols());
  std::vector<QrePoint> path;
  path.reserve(static_cast<size_t>(opts.steps));
  for (int k = 0; k < opts.steps; ++k) {
    const double t = opts.steps == 1 ? 1.0 : static_cast<double>(k) / (opts.steps - 1);
    const double lambda =
        opts.lambda_min * std::pow(opts.lambda_max / opts.lambda_min, t);
    QrePoint point = logit_qre(g, lambda, p, q, opts);
    p = point.attacker;
    q = point.defender;
    path.push_back(std::move(point));
  }
  return path;
}

Verification verify_equilibrium(const NormalForm& g, const StrategyProfile& p,
                                double epsilon) {
  validate_profile(g, p);
  const std::vector<double> ua = row_payoffs(g.attacker, p.defender);
  const std::vector<double> ud = col_payoffs(g.defender, p.attacker);
  double played_a = 0.0;
  double played_d = 0.0;
  double best_a = -std::numeric_limits<double>::infinity();
  double best_d = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows(); ++r) {
    played_a += p.attacker[static_cast<size_t>(r)] * ua[static_cast<size_t>(r)];
    best_a = std::max(best_a, ua[static_cast<size_t>(r)]);
  }
  for (int c = 0; c < g.cols(); ++c) {
    played_d += p.defender[static_cast<size_t>(c)] * ud[static_cast<size_t>(c)];
    best_d = std::max(best_d, ud[static_cast<size_t>(c)]);
  }
  Verification v;
  v.attacker_gain = best_a - played_a;
  v.defender_gain = best_d - played_d;
  v.ok = v.attacker_gain <= epsilon && v.defender_gain <= epsilon;
  return v;
}

bool solve_support(const NormalForm& g, const std::vector<int>& rows,
                   const std::vector<int>& cols, StrategyProfile* out) {
  check_sorted_support(rows, g.rows(), "attacker");
  check_sorted_support(cols, g.cols(), "defender");
  StrategyProfile p;
  if (!mix_for_indifference(g, cols, rows, /*support_is_cols=*/true,
                            &p.defender)) {
    return false;
  }
  if (!mix_for_indifference(g, rows, cols, /*support_is_cols=*/false,
                            &p.attacker)) {
    return false;
  }
  *out = std::move(p);
  return true;
}

namespace {

std::vector<int> support_of(const std::vector<double>& v, double cutoff) {
  std::vector<int> s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] > cutoff) s.push_back(static_cast<int>(i));
  }
  if (s.empty()) {
    s.push_back(static_cast<int>(
        std::max_element(v.begin(), v.end()) - v.begin()));
  }
  return s;
}

std::vector<std::vector<int>> subsets_by_size(int n) {
  if (n > 20) {
    throw DomainError("support enumeration limited to 20 strategies");
  }
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace

EquilibriumResult nash_from_qre(const NormalForm& g, const QreOptions& opts,
                                double epsilon) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
  EquilibriumResult result;
  result.epsilon = epsilon;
  result.trace = iterated_elimination(g).trace;
  result.path = logit_qre_trace(g, opts);

  const QrePoint& last = result.path.back();
  const std::vector<int> sa = support_of(last.attacker, opts.support_cutoff);
  const std::vector<int> sd = support_of(last.defender, opts.support_cutoff);

  StrategyProfile candidate;
  if (solve_support(g, sa, sd, &candidate)) {
    const Verification v = verify_equilibrium(g, candidate, epsilon);
    if (v.ok) {
      result.profile = std::move(candidate);
      result.method = "qre-polish";
      result.attacker_gain = v.attacker_gain;
      result.defender_gain = v.defender_gain;
      return result;
    }
  }

  // The detected support was wrong (e.g. the homotopy stopped short of the
  // limit). Enumerate support pairs, smallest first.
  for (const auto& rows : subsets_by_size(g.rows())) {
    for (const auto& cols : subsets_by_size(g.cols())) {
      if (!solve_support(g, rows, cols, &candidate)) continue;
      const Verification v = verify_equilibrium(g, candidate, epsilon);
      if (v.ok) {
        result.profile = std::move(candidate);
        result.method = "support-enumeration";
        result.attacker_gain = v.attacker_gain;
        result.defender_gain = v.defender_gain;
        return result;
      }
    }
  }
  throw ConvergenceError(opts.lambda_max, last.residual);
}

BehavioralStrategy to_behavioral(const NormalForm& g,
                                 const StrategyProfile& p) {
  validate_profile(g, p);
  BehavioralStrategy b;
  b.attacker = p.attacker;
  for (size_t n = 0; n < g.nodes.size(); ++n) {
    NodeMarginal m;
    m.label = g.nodes[n].label;
    m.actions = g.nodes[n].actions;
    m.probabilities.assign(m.actions.size(), 0.0);
    for (int c = 0; c < g.cols(); ++c) {
      const int choice = g.col_choices[static_cast<size_t>(c)][n];
      m.probabilities[static_cast<size_t>(choice)] +=
          p.defender[static_cast<size_t>(c)];
    }
    b.defender.push_back(std::move(m));
  }
  return b;
}

}  // namespace gamepot::solver
