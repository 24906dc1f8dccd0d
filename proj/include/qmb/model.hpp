#pragma once

// State spaces, transition-plausibility tables, and the unique Markovian
// prior they induce on run prefixes: the plausibility of [s0..sn] is the
// times-product of its transition entries, and any time-n event is the
// plus-sum of the prefixes it contains.
//
// Belief queries compare JOINT plausibilities Pl(A and E) vs Pl(~A and E);
// conditionals are never materialized (coherence makes the comparisons
// equivalent, and general domains have no division).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qmb/algebra.hpp"
#include "qmb/errors.hpp"

namespace qmb {

// ---------------------------------------------------------------------------
// state_space: ordered distinct identifiers plus the distinguished initial
// state. All runs are assumed to start at init.

class state_space {
 public:
  state_space(std::vector<std::string> states, const std::string& init)
      : states_(std::move(states)) {
    if (states_.empty()) throw validation_error("state space is empty");
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].empty()) throw validation_error("empty state identifier");
      auto [it, fresh] = index_.emplace(states_[i], static_cast<int>(i));
      if (!fresh)
        throw validation_error("duplicate state identifier: " + states_[i]);
    }
    auto it = index_.find(init);
    if (it == index_.end())
      throw validation_error("init state '" + init + "' not in state list");
    init_ = it->second;
  }

  int size() const { return static_cast<int>(states_.size()); }
  int init_index() const { return init_; }
  const std::string& name(int s) const { return states_.at(s); }
  const std::vector<std::string>& names() const { return states_; }

  std::optional<int> index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int require_index(std::string_view id) const {
    auto idx = index_of(id);
    if (!idx) throw unknown_state("unknown state: " + std::string(id));
    return *idx;
  }

 private:
  std::vector<std::string> states_;
  std::unordered_map<std::string, int> index_;
  int init_ = 0;
};

// A set of states, i.e. a proposition; its time-n event is the set of runs
// whose state at time n lies in it.
class proposition {
 public:
  explicit proposition(int n_states) : member_(n_states, false) {}

  static proposition full(int n_states) {
    proposition p(n_states);
    p.member_.assign(n_states, true);
    return p;
  }

  static proposition of(const state_space& space,
                        const std::vector<std::string>& ids) {
    proposition p(space.size());
    for (const auto& id : ids) p.add(space.require_index(id));
    return p;
  }

  proposition& add(int s) {
    member_.at(s) = true;
    return *this;
  }

  bool contains(int s) const { return member_.at(s); }
  int space_size() const { return static_cast<int>(member_.size()); }

  bool empty() const {
    for (bool b : member_)
      if (b) return false;
    return true;
  }

  proposition complement() const {
    proposition p(space_size());
    for (std::size_t i = 0; i < member_.size(); ++i)
      if (!member_[i]) p.add(static_cast<int>(i));
    return p;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < member_.size(); ++i)
      if (member_[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  friend bool operator==(const proposition&, const proposition&) = default;

 private:
  std::vector<bool> member_;
};

// Observations O1..On, one per time step starting at time 1. The denoted
// evidence event is the intersection of the per-time events.
using evidence = std::vector<proposition>;

inline void require_evidence_shape(const evidence& e, int n_states) {
  for (const auto& o : e) {
    if (o.space_size() != n_states)
      throw validation_error("observation over the wrong state space");
    if (o.empty())
      throw validation_error("empty observation denotes contradiction");
  }
}

// ---------------------------------------------------------------------------
// transition_model: total table of transition plausibilities over one
// domain. Entries never set remain bottom (impossible transition).

class transition_model {
 public:
  transition_model(state_space space, domain_kind kind)
      : space_(std::move(space)),
        kind_(kind),
        table_(static_cast<std::size_t>(space_.size()) * space_.size(),
               bottom(kind)) {}

  const state_space& space() const { return space_; }
  domain_kind kind() const { return kind_; }

  void set(int from, int to, plaus_value v) {
    if (v.kind() != kind_)
      throw domain_mismatch("transition value of kind " + v.kind().name() +
                            " in a " + kind_.name() + " model");
    table_.at(cell(from, to)) = std::move(v);
  }

  const plaus_value& at(int from, int to) const {
    return table_.at(cell(from, to));
  }

 private:
  std::size_t cell(int from, int to) const {
    if (from < 0 || from >= space_.size() || to < 0 || to >= space_.size())
      throw unknown_state("transition index out of range");
    return static_cast<std::size_t>(from) * space_.size() + to;
  }

  state_space space_;
  domain_kind kind_;
  std::vector<plaus_value> table_;
};

// ---------------------------------------------------------------------------
// Model validation: every row must plus-sum to top (the hypothesis under
// which the Markovian prior exists and is unique). Unreachable states are
// reported as a diagnostic only.

struct row_status {
  int state;
  plaus_value row_sum;
  bool normalized;
};

struct validation_report {
  std::vector<row_status> rows;
  std::vector<int> unreachable;

  bool valid() const {
    for (const auto& r : rows)
      if (!r.normalized) return false;
    return true;
  }
};

inline validation_report validate_model(const transition_model& m) {
  validation_report report;
  const int n = m.space().size();
  const plaus_value t = top(m.kind());
  for (int s = 0; s < n; ++s) {
    plaus_value sum = bottom(m.kind());
    for (int s2 = 0; s2 < n; ++s2) sum = plus(sum, m.at(s, s2));
    report.rows.push_back({s, sum, sum == t});
  }
  // reachability over non-bottom transitions
  std::vector<bool> seen(n, false);
  std::vector<int> stack{m.space().init_index()};
  seen[m.space().init_index()] = true;
  const plaus_value bot = bottom(m.kind());
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int s2 = 0; s2 < n; ++s2) {
      if (!seen[s2] && !(m.at(s, s2) == bot)) {
        seen[s2] = true;
        stack.push_back(s2);
      }
    }
  }
  for (int s = 0; s < n; ++s)
    if (!seen[s]) report.unreachable.push_back(s);
  return report;
}

// ---------------------------------------------------------------------------
// Prefix plausibility: the product formula. A prefix is a state-index path
// [s0..sn] starting at init; [s0] alone has plausibility top.

inline plaus_value prefix_plausibility(const transition_model& m,
                                       const std::vector<int>& path) {
  if (path.empty()) throw value_error("prefix must contain the initial state");
  for (int s : path)
    if (s < 0 || s >= m.space().size())
      throw unknown_state("prefix mentions a state outside the space");
  if (path.front() != m.space().init_index())
    throw validation_error("prefix does not start at the initial state");
  plaus_value out = top(m.kind());
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    out = times(out, m.at(path[i], path[i + 1]));
  return out;
}

// ---------------------------------------------------------------------------
// event_plausibility: plus over all n-prefixes consistent with the evidence
// (and, when given, passing through `a` at time `at`). This is the
// enumeration-grade reference; the filter is the fast path for at == n.

inline plaus_value event_plausibility(const transition_model& m, int horizon,
                                      const evidence* e, const proposition* a,
                                      int at) {
  if (horizon < 0) throw value_error("negative horizon");
  if (e) {
    if (static_cast<int>(e->size()) != horizon)
      throw length_mismatch("evidence horizon differs from query horizon");
    require_evidence_shape(*e, m.space().size());
  }
  if (at < 0 || at > horizon)
    throw value_error("query time outside [0, horizon]");

  const plaus_value bot = bottom(m.kind());
  const int init = m.space().init_index();
  if (a && !a->contains(init) && at == 0) return bot;

  plaus_value acc = bot;
  // depth-first walk over time steps, pruning observation mismatches and
  // dead products
  std::function<void(int, int, const plaus_value&)> walk =
      [&](int time, int state, const plaus_value& sofar) {
        if (time == horizon) {
          acc = plus(acc, sofar);
          return;
        }
        for (int next = 0; next < m.space().size(); ++next) {
          if (e && !(*e)[time].contains(next)) continue;
          if (a && time + 1 == at && !a->contains(next)) continue;
          plaus_value ext = times(sofar, m.at(state, next));
          if (ext == bot) continue;
          walk(time + 1, next, ext);
        }
      };
  walk(0, init, top(m.kind()));
  return acc;
}

// Bel: true iff the joint plausibility of A at `at` with the evidence
// strictly exceeds that of the complement. Equal and incomparable joints
// both answer false.
inline bool believes(const transition_model& m, const evidence& e,
                     const proposition& a, int at) {
  const int horizon = static_cast<int>(e.size());
  plaus_value pa = event_plausibility(m, horizon, &e, &a, at);
  proposition abar = a.complement();
  plaus_value pc = event_plausibility(m, horizon, &e, &abar, at);
  const plaus_value bot = bottom(m.kind());
  if (pa == bot && pc == bot)
    throw inconsistent_evidence(
        "every run consistent with the evidence has plausibility bottom");
  return compare(pa, pc) == compare_result::greater;
}

// ---------------------------------------------------------------------------
// finite_prior: a (not necessarily Markovian) plausibility assignment on all
// n-step prefixes, the input for qualitativeness checks and for the
// history-state construction. Prefixes are encoded in mixed radix over the
// states s1..sn (s0 is fixed at init).

class finite_prior {
 public:
  finite_prior(state_space space, domain_kind kind, int horizon,
               std::vector<plaus_value> values)
      : space_(std::move(space)), kind_(kind), horizon_(horizon),
        values_(std::move(values)) {
    if (horizon_ < 0) throw value_error("negative horizon");
    std::size_t expect = 1;
    for (int i = 0; i < horizon_; ++i) expect *= space_.size();
    if (values_.size() != expect)
      throw validation_error("prior table has wrong cardinality");
    plaus_value sum = bottom(kind_);
    for (const auto& v : values_) {
      if (v.kind() != kind_) throw domain_mismatch("mixed kinds in prior");
      sum = plus(sum, v);
    }
    if (!(sum == top(kind_)))
      throw validation_error("prior does not plus-sum to top");
  }

  const state_space& space() const { return space_; }
  domain_kind kind() const { return kind_; }
  int horizon() const { return horizon_; }
  std::size_t prefix_count() const { return values_.size(); }

  std::size_t encode(const std::vector<int>& path) const {
    if (static_cast<int>(path.size()) != horizon_ + 1)
      throw length_mismatch("prefix length differs from prior horizon");
    if (path.front() != space_.init_index())
      throw validation_error("prefix does not start at the initial state");
    std::size_t idx = 0;
    for (int i = 1; i <= horizon_; ++i) {
      int s = path[i];
      if (s < 0 || s >= space_.size()) throw unknown_state("bad state index");
      idx = idx * space_.size() + static_cast<std::size_t>(s);
    }
    return idx;
  }

  std::vector<int> decode(std::size_t idx) const {
    std::vector<int> path(horizon_ + 1, space_.init_index());
    for (int i = horizon_; i >= 1; --i) {
      path[i] = static_cast<int>(idx % space_.size());
      idx /= space_.size();
    }
    return path;
  }

  const plaus_value& rank_of_index(std::size_t idx) const {
    return values_.at(idx);
  }
  const plaus_value& rank_of(const std::vector<int>& path) const {
    return values_.at(encode(path));
  }

 private:
  state_space space_;
  domain_kind kind_;
  int horizon_;
  std::vector<plaus_value> values_;
};

// The Markovian prior of a model, restricted to one horizon.
inline finite_prior prior_from_model(const transition_model& m, int horizon) {
  std::size_t count = 1;
  for (int i = 0; i < horizon; ++i) {
    count *= m.space().size();
    if (count > 10'000'000)
      throw cap_exceeded("prefix table would exceed the enumeration cap");
  }
  std::vector<plaus_value> values;
  values.reserve(count);
  std::vector<int> path(horizon + 1, m.space().init_index());
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int i = horizon; i >= 1; --i) {
      path[i] = static_cast<int>(rest % m.space().size());
      rest /= m.space().size();
    }
    values.push_back(prefix_plausibility(m, path));
  }
  return finite_prior(m.space(), m.kind(), horizon, std::move(values));
}

// ---------------------------------------------------------------------------
// Qualitativeness and closure of beliefs under conjunction.
//
// A measure is qualitative when, for pairwise disjoint A, B, C with
// Pl(A u B) > Pl(C) and Pl(A u C) > Pl(B), it follows that
// Pl(A) > Pl(B u C). That is exactly the condition under which believed
// propositions stay believed under conjunction, so the two checks below
// validate each other.
//
// Both enumerate events over a finite atom set as bitmasks; the measure is
// supplied as a callable mask -> value and a comparator, so the same
// machinery serves domain-lawful priors and deliberately unlawful measures
// (e.g. additive ones) used as counterexamples.

inline constexpr int k_default_atom_cap = 12;

struct disjoint_triple_witness {
  std::uint32_t a, b, c;
};

struct conjunction_witness {
  std::uint32_t a, b;
};

namespace detail {

template <class PlFn>
std::vector<decltype(std::declval<PlFn>()(0u))> tabulate_masks(int n_atoms,
                                                               PlFn&& pl) {
  std::vector<decltype(pl(0u))> table;
  const std::uint32_t full = (n_atoms == 32) ? ~0u : ((1u << n_atoms) - 1);
  table.reserve(static_cast<std::size_t>(full) + 1);
  for (std::uint32_t m = 0;; ++m) {
    table.push_back(pl(m));
    if (m == full) break;
  }
  return table;
}

}  // namespace detail

// Searches for pairwise-disjoint events A, B, C with Pl(A u B) > Pl(C) and
// Pl(A u C) > Pl(B) but not Pl(A) > Pl(B u C). Returns the first violation
// found, or nullopt when the measure is qualitative over these atoms.
template <class PlFn, class CmpFn>
std::optional<disjoint_triple_witness> find_qualitativeness_violation(
    int n_atoms, PlFn&& pl, CmpFn&& cmp, int cap = k_default_atom_cap) {
  if (n_atoms > cap)
    throw cap_exceeded("atom count " + std::to_string(n_atoms) +
                       " exceeds the qualitativeness cap " +
                       std::to_string(cap));
  auto table = detail::tabulate_masks(n_atoms, pl);
  auto greater = [&](std::uint32_t x, std::uint32_t y) {
    return cmp(table[x], table[y]) == compare_result::greater;
  };

  // each atom is colored A, B, C, or unused; that enumerates exactly the
  // ordered pairwise-disjoint triples
  std::size_t total = 1;
  for (int i = 0; i < n_atoms; ++i) total *= 4;
  std::vector<int> color(n_atoms, 0);
  for (std::size_t step = 0; step < total; ++step) {
    std::uint32_t a = 0, b = 0, c = 0;
    std::size_t rest = step;
    for (int i = 0; i < n_atoms; ++i) {
      switch (rest & 3) {
        case 1: a |= 1u << i; break;
        case 2: b |= 1u << i; break;
        case 3: c |= 1u << i; break;
        default: break;
      }
      rest >>= 2;
    }
    if (greater(a | b, c) && greater(a | c, b) && !greater(a, b | c))
      return disjoint_triple_witness{a, b, c};
  }
  return std::nullopt;
}

// Bel relative to an evidence mask: A is believed iff the measure of
// (A and E) strictly exceeds the measure of (~A and E).
template <class Table, class CmpFn>
bool mask_believed(const Table& table, std::uint32_t full, std::uint32_t e,
                   std::uint32_t a, CmpFn&& cmp) {
  std::uint32_t abar = full & ~a;
  return cmp(table[a & e], table[abar & e]) == compare_result::greater;
}

// Searches for believed events A, B whose conjunction is not believed.
template <class PlFn, class CmpFn>
std::optional<conjunction_witness> find_conjunction_violation(
    int n_atoms, std::uint32_t evidence_mask, PlFn&& pl, CmpFn&& cmp,
    int cap = k_default_atom_cap) {
  if (n_atoms > cap)
    throw cap_exceeded("atom count " + std::to_string(n_atoms) +
                       " exceeds the conjunction-closure cap " +
                       std::to_string(cap));
  auto table = detail::tabulate_masks(n_atoms, pl);
  const std::uint32_t full = (n_atoms == 32) ? ~0u : ((1u << n_atoms) - 1);

  std::vector<std::uint32_t> believed;
  for (std::uint32_t a = 0; a <= full; ++a)
    if (mask_believed(table, full, evidence_mask, a, cmp)) believed.push_back(a);
  for (std::uint32_t a : believed)
    for (std::uint32_t b : believed)
      if (!mask_believed(table, full, evidence_mask, a & b, cmp))
        return conjunction_witness{a, b};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// finite_prior front ends. Atoms are the prefixes with non-bottom rank:
// bottom atoms contribute nothing to any union, so dropping them changes no
// comparison and keeps the atom count within the cap for sparse models.

struct prior_atoms {
  std::vector<std::size_t> prefix_indices;  // atom bit i -> prefix index
};

inline prior_atoms nonbottom_atoms(const finite_prior& p) {
  prior_atoms atoms;
  const plaus_value bot = bottom(p.kind());
  for (std::size_t i = 0; i < p.prefix_count(); ++i)
    if (!(p.rank_of_index(i) == bot)) atoms.prefix_indices.push_back(i);
  return atoms;
}

namespace detail {

inline auto prior_mask_measure(const finite_prior& p, const prior_atoms& atoms) {
  return [&p, &atoms](std::uint32_t mask) {
    plaus_value acc = bottom(p.kind());
    for (std::size_t i = 0; i < atoms.prefix_indices.size(); ++i)
      if (mask & (1u << i))
        acc = plus(acc, p.rank_of_index(atoms.prefix_indices[i]));
    return acc;
  };
}

}  // namespace detail

struct qualitativeness_result {
  bool qualitative;
  std::optional<disjoint_triple_witness> witness;
};

inline qualitativeness_result check_qualitative(const finite_prior& p,
                                                int cap = k_default_atom_cap) {
  auto atoms = nonbottom_atoms(p);
  auto w = find_qualitativeness_violation(
      static_cast<int>(atoms.prefix_indices.size()),
      detail::prior_mask_measure(p, atoms),
      [](const plaus_value& a, const plaus_value& b) { return compare(a, b); },
      cap);
  return {!w.has_value(), w};
}

struct conjunction_result {
  bool closed;
  std::optional<conjunction_witness> witness;
};

// evidence_mask is over the non-bottom atoms of p, as produced by
// nonbottom_atoms.
inline conjunction_result check_closure_under_conjunction(
    const finite_prior& p, std::uint32_t evidence_mask,
    int cap = k_default_atom_cap) {
  auto atoms = nonbottom_atoms(p);
  auto w = find_conjunction_violation(
      static_cast<int>(atoms.prefix_indices.size()), evidence_mask,
      detail::prior_mask_measure(p, atoms),
      [](const plaus_value& a, const plaus_value& b) { return compare(a, b); },
      cap);
  return {!w.has_value(), w};
}

}  // namespace qmb
