#pragma once

// Partially specified transitions: a preorder over transition variables
// x_{s,s'} plus impossibility marks, and the consequences every consistent
// qualitative Markovian measure must share.
//
// The closure treats an impossible variable as below everything (its value
// is pinned to bottom), and anything weakly below an impossible variable is
// itself impossible. A declared strict relation whose reverse weak relation
// is derivable is a contradiction and is rejected at construction.
//
// Prefixes of equal length are compared by bijectively matching their
// transition steps: p is below q when p takes an impossible step, or when
// every step of p can be paired with a distinct step of q that weakly
// dominates it. Soundness: whatever times operator a consistent measure
// uses, matched products are ordered, so the verdicts here hold in every
// consistent model.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qmb/model.hpp"

namespace qmb {

struct transition_var {
  int from = 0;
  int to = 0;
  friend bool operator==(const transition_var&, const transition_var&) = default;
};

enum class constraint_rel { le, eq, lt };

struct constraint {
  transition_var lhs;
  constraint_rel rel = constraint_rel::le;
  transition_var rhs;
};

class constraint_set {
 public:
  constraint_set(state_space space, std::vector<constraint> relations,
                 std::vector<transition_var> impossible_vars)
      : space_(std::move(space)), n_(space_.size()) {
    const int vars = n_ * n_;
    reach_.assign(static_cast<std::size_t>(vars) * vars, false);
    impossible_.assign(vars, false);
    for (int v = 0; v < vars; ++v) reach_at(v, v) = true;

    std::vector<std::pair<int, int>> strict;
    for (const auto& c : relations) {
      int a = var_id(c.lhs), b = var_id(c.rhs);
      switch (c.rel) {
        case constraint_rel::le:
          reach_at(a, b) = true;
          break;
        case constraint_rel::eq:
          reach_at(a, b) = true;
          reach_at(b, a) = true;
          break;
        case constraint_rel::lt:
          reach_at(a, b) = true;
          strict.emplace_back(a, b);
          break;
      }
    }
    // Floyd-Warshall transitive closure
    for (int k = 0; k < vars; ++k)
      for (int i = 0; i < vars; ++i)
        if (reach_at(i, k))
          for (int j = 0; j < vars; ++j)
            if (reach_at(k, j)) reach_at(i, j) = true;

    // a variable weakly below an impossible one is forced to bottom too
    for (const auto& v : impossible_vars) impossible_[var_id(v)] = true;
    for (int x = 0; x < vars; ++x) {
      if (impossible_[x]) continue;
      for (int y = 0; y < vars; ++y) {
        if (reach_at(x, y) && impossible_[y]) {
          impossible_[x] = true;
          break;
        }
      }
    }

    for (auto [a, b] : strict) {
      if (var_leq(b, a))
        throw constraint_cycle("strict relation " + var_name(a) + " < " +
                               var_name(b) +
                               " contradicts a derivable reverse relation");
    }
  }

  const state_space& space() const { return space_; }
  int var_count() const { return n_ * n_; }

  int var_id(transition_var v) const {
    if (v.from < 0 || v.from >= n_ || v.to < 0 || v.to >= n_)
      throw unknown_state("transition variable outside the state space");
    return v.from * n_ + v.to;
  }

  transition_var var_of(int id) const { return {id / n_, id % n_}; }

  std::string var_name(int id) const {
    auto v = var_of(id);
    return "x(" + space_.name(v.from) + "," + space_.name(v.to) + ")";
  }

  bool impossible(transition_var v) const { return impossible_[var_id(v)]; }

  // weak order on variable ids, impossibility folded in (bottom <= anything)
  bool var_leq(int x, int y) const { return impossible_[x] || reach_at(x, y); }

  bool var_lt(int x, int y) const { return var_leq(x, y) && !var_leq(y, x); }

  bool entails(transition_var x, constraint_rel rel, transition_var y) const {
    int a = var_id(x), b = var_id(y);
    switch (rel) {
      case constraint_rel::le:
        return var_leq(a, b);
      case constraint_rel::eq:
        return var_leq(a, b) && var_leq(b, a);
      case constraint_rel::lt:
        return var_lt(a, b);
    }
    return false;
  }

 private:
  std::vector<bool>::reference reach_at(int i, int j) {
    return reach_[static_cast<std::size_t>(i) * n_ * n_ + j];
  }
  bool reach_at(int i, int j) const {
    return reach_[static_cast<std::size_t>(i) * n_ * n_ + j];
  }

  state_space space_;
  int n_;
  std::vector<bool> reach_;
  std::vector<bool> impossible_;
};

// ---------------------------------------------------------------------------
// safety: a set is unsafe when some variable strictly dominates every
// outgoing transition of some state; no qualitative measure can normalize
// that state's row.

struct safety_result {
  bool safe = true;
  int witness_state = -1;
  transition_var dominator;
};

inline safety_result check_safe(const constraint_set& c) {
  const int n = c.space().size();
  for (int s = 0; s < n; ++s) {
    for (int y = 0; y < c.var_count(); ++y) {
      bool dominates_row = true;
      for (int s2 = 0; s2 < n && dominates_row; ++s2)
        dominates_row = c.var_lt(c.var_id({s, s2}), y);
      if (dominates_row) return {false, s, c.var_of(y)};
    }
  }
  return {true, -1, {}};
}

// ---------------------------------------------------------------------------
// prefix comparison

enum class prefix_order { below, above, equivalent, incomparable };

namespace detail {

// Kuhn's augmenting-path matching on the step-compatibility graph.
// Deterministic: left steps and candidate right steps are tried in index
// order, so verdicts are reproducible.
class step_matcher {
 public:
  explicit step_matcher(const std::vector<std::vector<bool>>& edge)
      : edge_(edge), match_right_(edge.size(), -1) {}

  bool perfect() {
    const int n = static_cast<int>(edge_.size());
    int matched = 0;
    for (int i = 0; i < n; ++i) {
      visited_.assign(n, false);
      if (augment(i)) ++matched;
    }
    return matched == n;
  }

 private:
  bool augment(int left) {
    const int n = static_cast<int>(edge_.size());
    for (int j = 0; j < n; ++j) {
      if (!edge_[left][j] || visited_[j]) continue;
      visited_[j] = true;
      if (match_right_[j] == -1 || augment(match_right_[j])) {
        match_right_[j] = left;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<bool>>& edge_;
  std::vector<int> match_right_;
  std::vector<bool> visited_;
};

inline bool prefix_below(const constraint_set& c, const std::vector<int>& p,
                         const std::vector<int>& q) {
  const int steps = static_cast<int>(p.size()) - 1;
  // a prefix with an impossible step denotes a bottom event: below everything
  for (int i = 0; i < steps; ++i)
    if (c.impossible({p[i], p[i + 1]})) return true;
  std::vector<std::vector<bool>> edge(steps, std::vector<bool>(steps, false));
  for (int i = 0; i < steps; ++i) {
    int x = c.var_id({p[i], p[i + 1]});
    for (int j = 0; j < steps; ++j)
      edge[i][j] = c.var_leq(x, c.var_id({q[j], q[j + 1]}));
  }
  return step_matcher(edge).perfect();
}

}  // namespace detail

inline prefix_order compare_prefixes(const constraint_set& c,
                                     const std::vector<int>& p,
                                     const std::vector<int>& q) {
  if (p.size() != q.size())
    throw length_mismatch("prefixes of different lengths are never compared");
  if (p.empty()) throw value_error("prefix must contain the initial state");
  const int init = c.space().init_index();
  if (p.front() != init || q.front() != init)
    throw validation_error("prefix does not start at the initial state");
  bool below = detail::prefix_below(c, p, q);
  bool above = detail::prefix_below(c, q, p);
  if (below && above) return prefix_order::equivalent;
  if (below) return prefix_order::below;
  if (above) return prefix_order::above;
  return prefix_order::incomparable;
}

// ---------------------------------------------------------------------------
// MAX^n and entailed beliefs

// Evidence-consistent n-prefixes with no impossible step, maximal under the
// strict prefix order. Sorted lexicographically by state indices.
inline std::vector<std::vector<int>> max_prefixes(const constraint_set& c,
                                                  int horizon,
                                                  const evidence& e) {
  if (static_cast<int>(e.size()) != horizon)
    throw length_mismatch("evidence horizon differs from query horizon");
  require_evidence_shape(e, c.space().size());
  const int n = c.space().size();
  std::size_t count = 1;
  for (int i = 0; i < horizon; ++i) {
    count *= static_cast<std::size_t>(n);
    if (count > 10'000'000)
      throw cap_exceeded("prefix enumeration exceeds the cap");
  }

  std::vector<std::vector<int>> candidates;
  std::vector<int> path(horizon + 1, c.space().init_index());
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int i = horizon; i >= 1; --i) {
      path[i] = static_cast<int>(rest % n);
      rest /= n;
    }
    bool ok = true;
    for (int t = 1; t <= horizon && ok; ++t) ok = e[t - 1].contains(path[t]);
    for (int t = 0; t < horizon && ok; ++t)
      ok = !c.impossible({path[t], path[t + 1]});
    if (ok) candidates.push_back(path);
  }

  std::vector<std::vector<int>> maxima;
  for (const auto& p : candidates) {
    bool dominated = false;
    for (const auto& q : candidates) {
      if (&p == &q) continue;
      if (detail::prefix_below(c, p, q) && !detail::prefix_below(c, q, p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maxima.push_back(p);
  }
  return maxima;
}

enum class entailed_belief_result { believed, not_believed, undetermined };

// Believed when every maximal prefix passes through `a` at time `at`. When
// they do not all pass but are pairwise equivalent, the belief provably
// fails in every consistent measure; otherwise different consistent
// measures can disagree and the answer is undetermined.
inline entailed_belief_result entailed_belief(const constraint_set& c,
                                              const evidence& e,
                                              const proposition& a, int at) {
  auto safety = check_safe(c);
  if (!safety.safe)
    throw unsafe_constraints("unsafe constraint set: every transition of " +
                             c.space().name(safety.witness_state) +
                             " is strictly dominated");
  const int horizon = static_cast<int>(e.size());
  if (at < 0 || at > horizon) throw value_error("query time outside [0, horizon]");
  auto maxima = max_prefixes(c, horizon, e);
  if (maxima.empty())
    throw inconsistent_evidence(
        "no possible prefix is consistent with the evidence");

  bool all_pass = true;
  for (const auto& p : maxima) all_pass = all_pass && a.contains(p[at]);
  if (all_pass) return entailed_belief_result::believed;

  for (std::size_t i = 0; i < maxima.size(); ++i)
    for (std::size_t j = i + 1; j < maxima.size(); ++j)
      if (compare_prefixes(c, maxima[i], maxima[j]) != prefix_order::equivalent)
        return entailed_belief_result::undetermined;
  return entailed_belief_result::not_believed;
}

// ---------------------------------------------------------------------------
// sampling a concrete kappa witness

// Assigns every non-impossible variable a finite rank respecting the
// constraint closure: equivalence classes share a rank, and each class sits
// a seeded random gap (1..3) below the most plausible class above it.
// Classes dominated by nothing get rank 0, so every row that contains such a
// class normalizes. A safe set can still lack a kappa witness when each
// variable of some row is dominated by a *different* variable (a partially
// ordered domain is needed then); that case is reported as unsatisfiable
// instead of emitting an unnormalizable row.
inline transition_model sample_consistent_kappa(const constraint_set& c,
                                                std::uint64_t seed) {
  auto safety = check_safe(c);
  if (!safety.safe)
    throw unsafe_constraints("unsafe constraint set: every transition of " +
                             c.space().name(safety.witness_state) +
                             " is strictly dominated");

  const int vars = c.var_count();
  // equivalence classes of mutually reachable, non-impossible variables
  std::vector<int> klass(vars, -1);
  std::vector<int> representative;
  for (int x = 0; x < vars; ++x) {
    if (c.impossible(c.var_of(x)) || klass[x] != -1) continue;
    int id = static_cast<int>(representative.size());
    representative.push_back(x);
    klass[x] = id;
    for (int y = x + 1; y < vars; ++y) {
      if (c.impossible(c.var_of(y)) || klass[y] != -1) continue;
      if (c.var_leq(x, y) && c.var_leq(y, x)) klass[y] = id;
    }
  }
  const int classes = static_cast<int>(representative.size());

  // depth = length of the longest strict chain above a class
  auto strictly_below = [&](int ca, int cb) {
    return c.var_lt(representative[ca], representative[cb]);
  };
  std::vector<int> depth(classes, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < classes; ++a)
      for (int b = 0; b < classes; ++b)
        if (strictly_below(a, b) && depth[a] < depth[b] + 1) {
          depth[a] = depth[b] + 1;
          changed = true;
        }
  }

  std::vector<int> order(classes);
  for (int i = 0; i < classes; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth[a] != depth[b]) return depth[a] < depth[b];
    return representative[a] < representative[b];
  });

  std::mt19937_64 rng(seed);
  std::vector<extended_nat> rank(classes, extended_nat(0));
  for (int idx : order) {
    if (depth[idx] == 0) continue;  // nothing strictly above: fully plausible
    std::uint64_t best_above = 0;
    for (int b = 0; b < classes; ++b)
      if (strictly_below(idx, b))
        best_above = std::max(best_above, rank[b].rank());
    std::uint64_t gap = 1 + rng() % 3;
    rank[idx] = extended_nat(best_above + gap);
  }

  transition_model m(c.space(), domain_kind::kappa());
  const int n = c.space().size();
  for (int s = 0; s < n; ++s) {
    bool row_has_top = false;
    for (int s2 = 0; s2 < n; ++s2) {
      transition_var v{s, s2};
      if (c.impossible(v)) continue;
      auto r = rank[klass[c.var_id(v)]];
      if (r == extended_nat(0)) row_has_top = true;
      m.set(s, s2, plaus_value::kappa(r));
    }
    if (!row_has_top)
      throw unsafe_constraints(
          "no kappa model: every outgoing transition of " + c.space().name(s) +
          " is strictly dominated by something (a partially ordered domain "
          "would be required)");
  }
  return m;
}

}  // namespace qmb
