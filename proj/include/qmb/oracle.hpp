#pragma once

// Brute-force reference semantics. Everything here is deliberately computed
// from materialized prefix tables, independently of the model module's
// recursive event walk and of the filter, so the three routes can check each
// other.
//
// Also hosts the history-state construction for kappa priors: an arbitrary
// (possibly non-Markovian) finite-horizon kappa prior is simulated exactly by
// a Markovian model whose states are the prefixes of the source space. The
// construction needs rank subtraction, which only kappa provides; other
// domains are rejected rather than approximated.

#include <functional>
#include <string>
#include <vector>

#include "qmb/model.hpp"

namespace qmb {

inline constexpr std::size_t k_enumeration_cap = 10'000'000;

struct prefix_table {
  int horizon = 0;
  domain_kind kind;
  // lexicographically ordered by state indices; bottom rows omitted
  std::vector<std::pair<std::vector<int>, plaus_value>> rows;
};

inline prefix_table enumerate_prefixes(const transition_model& m, int horizon,
                                       const evidence* e = nullptr) {
  if (horizon < 0) throw value_error("negative horizon");
  if (e) {
    if (static_cast<int>(e->size()) != horizon)
      throw length_mismatch("evidence horizon differs from enumeration horizon");
    require_evidence_shape(*e, m.space().size());
  }
  std::size_t count = 1;
  for (int i = 0; i < horizon; ++i) {
    count *= static_cast<std::size_t>(m.space().size());
    if (count > k_enumeration_cap)
      throw cap_exceeded("enumeration of " + std::to_string(horizon) +
                         "-prefixes exceeds the cap");
  }

  prefix_table table;
  table.horizon = horizon;
  table.kind = m.kind();
  const plaus_value bot = bottom(m.kind());

  // depth-first in state order, so rows come out lexicographically sorted;
  // bottom products terminate a whole subtree (they could only yield omitted
  // rows)
  std::vector<int> path(horizon + 1, m.space().init_index());
  std::function<void(int, const plaus_value&)> walk =
      [&](int time, const plaus_value& sofar) {
        if (time == horizon) {
          table.rows.emplace_back(path, sofar);
          return;
        }
        for (int next = 0; next < m.space().size(); ++next) {
          if (e && !(*e)[time].contains(next)) continue;
          plaus_value ext = times(sofar, m.at(path[time], next));
          if (ext == bot) continue;
          path[time + 1] = next;
          walk(time + 1, ext);
        }
      };
  walk(0, top(m.kind()));
  return table;
}

inline std::string to_text(const prefix_table& table, const state_space& sp) {
  std::string out;
  for (const auto& [path, v] : table.rows) {
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) out += ">";
      out += sp.name(path[i]);
    }
    out += "\t" + v.to_string() + "\n";
  }
  return out;
}

namespace detail {

inline plaus_value table_event_sum(const prefix_table& t,
                                   const proposition* a, int at) {
  plaus_value acc = bottom(t.kind);
  for (const auto& [path, v] : t.rows) {
    if (a && !a->contains(path[at])) continue;
    acc = plus(acc, v);
  }
  return acc;
}

}  // namespace detail

// Same contract as believes(), computed solely from the prefix table.
inline bool oracle_believes(const transition_model& m, const evidence& e,
                            const proposition& a, int at) {
  const int horizon = static_cast<int>(e.size());
  if (at < 0 || at > horizon) throw value_error("query time outside [0, horizon]");
  auto table = enumerate_prefixes(m, horizon, &e);
  if (table.rows.empty())
    throw inconsistent_evidence(
        "every run consistent with the evidence has plausibility bottom");
  plaus_value in = detail::table_event_sum(table, &a, at);
  proposition abar = a.complement();
  plaus_value out = detail::table_event_sum(table, &abar, at);
  return compare(in, out) == compare_result::greater;
}

// kappa(A at `at`, E) - kappa(E): the conditional rank, 0 for the most
// plausible answers. Defined for kappa models only.
inline extended_nat conditional_kappa(const transition_model& m,
                                      const evidence& e, const proposition& a,
                                      int at) {
  if (m.kind() != domain_kind::kappa())
    throw domain_mismatch("conditional ranks are defined for kappa models only");
  const int horizon = static_cast<int>(e.size());
  if (at < 0 || at > horizon) throw value_error("query time outside [0, horizon]");
  auto table = enumerate_prefixes(m, horizon, &e);
  if (table.rows.empty())
    throw inconsistent_evidence(
        "every run consistent with the evidence has plausibility bottom");
  extended_nat evidence_rank =
      detail::table_event_sum(table, nullptr, 0).as_kappa();
  extended_nat joint_rank = detail::table_event_sum(table, &a, at).as_kappa();
  return subtract(joint_rank, evidence_rank, extended_nat::infinity());
}

// ---------------------------------------------------------------------------
// history model

// A Markovian model over history states (prefixes of the source space, up to
// the construction horizon), together with the projection onto the last
// source state. Rows of full-length histories are left all-bottom: behavior
// past the horizon is unspecified and in-horizon queries never consult them.
struct history_model {
  transition_model model;
  std::vector<std::vector<int>> histories;  // history state -> source prefix
  std::vector<int> projection;              // history state -> last source state
  int horizon = 0;

  proposition lift(const proposition& source_prop) const {
    proposition out(static_cast<int>(histories.size()));
    for (std::size_t h = 0; h < histories.size(); ++h)
      if (source_prop.contains(projection[h])) out.add(static_cast<int>(h));
    return out;
  }

  evidence lift(const evidence& source_evidence) const {
    evidence out;
    for (const auto& o : source_evidence) out.push_back(lift(o));
    return out;
  }
};

// Builds the history model of a kappa prior. Transition ranks are rank
// differences: t(h -> h.s) = kappa(h.s) - kappa(h), where the rank of an
// interior history is the minimum over its full-horizon extensions. On dead
// branches (both ranks infinite) the difference is taken to be 0, which
// keeps every interior row normalized; dead histories are unreachable, so
// the choice is invisible to queries.
inline history_model markovianize_kappa(const finite_prior& p) {
  if (p.kind() != domain_kind::kappa())
    throw domain_mismatch(
        "the history construction needs rank subtraction; kappa only");
  const state_space& sp = p.space();
  const int n = p.horizon();
  const int s_count = sp.size();

  // enumerate histories level by level; level m holds all length-m paths
  std::vector<std::size_t> level_start;  // index of first history of level m
  std::vector<std::vector<int>> histories;
  std::vector<std::size_t> parent;
  level_start.push_back(0);
  histories.push_back({sp.init_index()});
  parent.push_back(0);
  for (int m = 1; m <= n; ++m) {
    level_start.push_back(histories.size());
    std::size_t begin = level_start[m - 1], end = level_start[m];
    for (std::size_t h = begin; h < end; ++h) {
      for (int s = 0; s < s_count; ++s) {
        auto path = histories[h];
        path.push_back(s);
        parent.push_back(h);
        histories.push_back(std::move(path));
      }
    }
  }

  // interior ranks: min over children, leaves from the prior
  std::vector<extended_nat> rank(histories.size());
  for (std::size_t h = level_start[n]; h < histories.size(); ++h)
    rank[h] = p.rank_of(histories[h]).as_kappa();
  for (int m = n - 1; m >= 0; --m) {
    std::size_t begin = level_start[m];
    std::size_t end = (m + 1 <= n) ? level_start[m + 1] : histories.size();
    for (std::size_t h = begin; h < end; ++h) {
      extended_nat best = extended_nat::infinity();
      std::size_t child = level_start[m + 1] + (h - begin) * s_count;
      for (int s = 0; s < s_count; ++s) best = min(best, rank[child + s]);
      rank[h] = best;
    }
  }

  // name history states by their source paths
  std::vector<std::string> names;
  names.reserve(histories.size());
  for (const auto& path : histories) {
    std::string name;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) name += ">";
      name += sp.name(path[i]);
    }
    names.push_back(std::move(name));
  }

  history_model out{
      transition_model(state_space(names, names.front()), domain_kind::kappa()),
      histories,
      {},
      n};
  for (const auto& path : histories) out.projection.push_back(path.back());

  for (std::size_t h = 0; h < histories.size(); ++h) {
    int m = static_cast<int>(histories[h].size()) - 1;
    if (m == n) continue;  // no outgoing transitions past the horizon
    std::size_t child =
        level_start[m + 1] + (h - level_start[m]) * s_count;
    for (int s = 0; s < s_count; ++s) {
      extended_nat t = subtract(rank[child + s], rank[h], /*inf - inf*/ 0);
      out.model.set(static_cast<int>(h), static_cast<int>(child + s),
                    plaus_value::kappa(t));
    }
  }
  return out;
}

}  // namespace qmb
