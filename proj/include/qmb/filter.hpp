#pragma once

// Forward filtering: maintains the joint plausibilities Pl(S_n = s, E_n) as
// observations arrive, one two-stage step per observation. Predict combines
// each target state's incoming transitions with the previous vector; prune
// sends states outside the observation to bottom.
//
// The state stores JOINT values, never conditionals, so results compare
// bit-exactly against prefix enumeration. Past-time queries (at < n) are not
// answerable from this vector; they go through enumeration, at the cost of
// |S|^n work instead of the filter's |S|^2 per step.

#include <vector>

#include "qmb/model.hpp"

namespace qmb {

enum class inconsistency_mode { strict, lenient };

struct filter_state {
  const transition_model* model = nullptr;
  int time = 0;
  std::vector<plaus_value> vec;  // state index -> Pl(S_time = s, E_time)
  bool consistent = true;
};

inline filter_state init_filter(const transition_model& m) {
  filter_state f;
  f.model = &m;
  f.time = 0;
  f.vec.assign(m.space().size(), bottom(m.kind()));
  f.vec[m.space().init_index()] = top(m.kind());
  f.consistent = true;
  return f;
}

inline filter_state step(const filter_state& f, const proposition& o,
                         inconsistency_mode mode = inconsistency_mode::strict) {
  if (!f.model) throw value_error("uninitialized filter state");
  const transition_model& m = *f.model;
  if (!f.consistent)
    throw inconsistent_evidence(
        "cannot step a filter state that is already inconsistent");
  if (o.space_size() != m.space().size())
    throw validation_error("observation over the wrong state space");
  if (o.empty())
    throw validation_error("empty observation denotes contradiction");

  const plaus_value bot = bottom(m.kind());
  filter_state next;
  next.model = f.model;
  next.time = f.time + 1;
  next.vec.assign(m.space().size(), bot);
  bool any = false;
  for (int s = 0; s < m.space().size(); ++s) {
    if (!o.contains(s)) continue;  // prune
    plaus_value acc = bot;
    for (int prev = 0; prev < m.space().size(); ++prev)
      acc = plus(acc, times(m.at(prev, s), f.vec[prev]));
    if (!(acc == bot)) any = true;
    next.vec[s] = std::move(acc);
  }
  next.consistent = any;
  if (!any && mode == inconsistency_mode::strict)
    throw inconsistent_evidence("observation at time " +
                                std::to_string(next.time) +
                                " is inconsistent with the evidence so far");
  return next;
}

// Pl(A at current time, E) > Pl(~A, E)?
inline bool filter_believes(const filter_state& f, const proposition& a) {
  if (!f.model) throw value_error("uninitialized filter state");
  if (!f.consistent)
    throw inconsistent_evidence("belief query on an inconsistent filter state");
  const plaus_value bot = bottom(f.model->kind());
  plaus_value in = bot, out = bot;
  for (int s = 0; s < f.model->space().size(); ++s) {
    if (a.contains(s))
      in = plus(in, f.vec[s]);
    else
      out = plus(out, f.vec[s]);
  }
  return compare(in, out) == compare_result::greater;
}

// Runs the filter across a whole observation sequence and returns the trace
// of n+1 states. In strict mode an inconsistent step throws (with its time
// index in the message); in lenient mode the trace ends at the first dead
// state.
inline std::vector<filter_state> run_filter(
    const transition_model& m, const evidence& e,
    inconsistency_mode mode = inconsistency_mode::strict) {
  require_evidence_shape(e, m.space().size());
  std::vector<filter_state> trace;
  trace.push_back(init_filter(m));
  for (const auto& o : e) {
    trace.push_back(step(trace.back(), o, mode));
    if (!trace.back().consistent) break;
  }
  return trace;
}

}  // namespace qmb
