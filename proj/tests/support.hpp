#pragma once

// Shared test-side oracles and generators. These are deliberately primitive:
// direct folds over prior tables, no reuse of the library's query paths.

#include <random>
#include <vector>

#include "qmb/model.hpp"

namespace qmb::testing {

// Minimum rank over the prefixes of a kappa prior that match the first
// |e| observations and (when given) pass through `a` at time `at`.
inline extended_nat prior_event_rank(const finite_prior& p, const evidence& e,
                                     const proposition* a, int at) {
  extended_nat best = extended_nat::infinity();
  for (std::size_t idx = 0; idx < p.prefix_count(); ++idx) {
    auto path = p.decode(idx);
    bool match = true;
    for (std::size_t t = 1; t <= e.size() && match; ++t)
      match = e[t - 1].contains(path[t]);
    if (!match) continue;
    if (a && !a->contains(path[at])) continue;
    best = min(best, p.rank_of_index(idx).as_kappa());
  }
  return best;
}

// Belief under a kappa prior via joint rank comparison. Throws when the
// evidence event itself has rank infinity.
inline bool prior_believes(const finite_prior& p, const evidence& e,
                           const proposition& a, int at) {
  extended_nat in = prior_event_rank(p, e, &a, at);
  proposition abar = a.complement();
  extended_nat out = prior_event_rank(p, e, &abar, at);
  if (in.is_infinite() && out.is_infinite())
    throw inconsistent_evidence("evidence event has rank infinity");
  return numeric_less(in, out);
}

// All nonempty observation sequences over `space_size` states with lengths
// 1..max_len.
inline std::vector<evidence> all_observation_sequences(int space_size,
                                                       int max_len) {
  std::vector<evidence> out;
  const int masks = (1 << space_size) - 1;
  std::vector<evidence> frontier{evidence{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<evidence> next;
    for (const auto& e : frontier) {
      for (int mask = 1; mask <= masks; ++mask) {
        proposition o(space_size);
        for (int s = 0; s < space_size; ++s)
          if (mask & (1 << s)) o.add(s);
        evidence e2 = e;
        e2.push_back(o);
        next.push_back(e2);
        out.push_back(std::move(e2));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

inline std::vector<proposition> all_propositions(int space_size,
                                                 bool include_empty = false) {
  std::vector<proposition> out;
  for (int mask = include_empty ? 0 : 1; mask < (1 << space_size); ++mask) {
    proposition p(space_size);
    for (int s = 0; s < space_size; ++s)
      if (mask & (1 << s)) p.add(s);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace qmb::testing
