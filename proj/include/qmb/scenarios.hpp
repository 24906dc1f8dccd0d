#pragma once

// Packaged car scenarios used by the demos and the regression tests.
//
// States: PF = parked with a full tank, PE = parked with an empty tank,
// G = gone (not parked, tank full). Changes are surprising: self-loops
// rank 0, a leak (PF->PE) rank 3, the car being taken (PF->G) or returned
// empty (G->PE) rank 1, everything else impossible.

#include <string>
#include <vector>

#include "qmb/constraints.hpp"
#include "qmb/model.hpp"

namespace qmb::scenarios {

inline const char* kParkedFull = "PF";
inline const char* kParkedEmpty = "PE";
inline const char* kGone = "G";

inline state_space car_space() {
  return state_space({kParkedFull, kParkedEmpty, kGone}, kParkedFull);
}

inline transition_model car_model() {
  transition_model m(car_space(), domain_kind::kappa());
  const auto& sp = m.space();
  int pf = sp.require_index(kParkedFull);
  int pe = sp.require_index(kParkedEmpty);
  int g = sp.require_index(kGone);
  auto k = [](std::uint64_t r) { return plaus_value::kappa(r); };
  m.set(pf, pf, k(0));
  m.set(pe, pe, k(0));
  m.set(g, g, k(0));
  m.set(pf, pe, k(3));
  m.set(pf, g, k(1));
  m.set(g, pe, k(1));
  return m;
}

inline proposition parked(const state_space& sp) {
  return proposition::of(sp, {kParkedFull, kParkedEmpty});
}

inline proposition not_parked(const state_space& sp) {
  return proposition::of(sp, {kGone});
}

// Car parked at time 0, observed gone at time 3.
inline evidence evidence_stolen(const state_space& sp) {
  return {proposition::full(sp.size()), proposition::full(sp.size()),
          not_parked(sp)};
}

// Car parked at time 0, still parked at time 2.
inline evidence evidence_borrowed2(const state_space& sp) {
  return {proposition::full(sp.size()), parked(sp)};
}

// ... and parked with an empty tank at time 3.
inline evidence evidence_borrowed3(const state_space& sp) {
  return {proposition::full(sp.size()), parked(sp),
          proposition::of(sp, {kParkedEmpty})};
}

// --- partially specified variants -------------------------------------------

namespace detail {

inline transition_var var(const state_space& sp, const char* from,
                          const char* to) {
  return {sp.require_index(from), sp.require_index(to)};
}

inline std::vector<transition_var> car_impossible(const state_space& sp) {
  return {var(sp, kParkedEmpty, kParkedFull), var(sp, kParkedEmpty, kGone),
          var(sp, kGone, kParkedFull)};
}

inline std::vector<constraint> self_loops_equal(const state_space& sp) {
  auto pfpf = var(sp, kParkedFull, kParkedFull);
  auto pepe = var(sp, kParkedEmpty, kParkedEmpty);
  auto gg = var(sp, kGone, kGone);
  return {{pfpf, constraint_rel::eq, pepe}, {pepe, constraint_rel::eq, gg}};
}

}  // namespace detail

// Fully chained order: x(PF,PE) < x(PF,G) = x(G,PE) < self-loops.
inline constraint_set car_chain_constraints() {
  auto sp = car_space();
  auto rel = detail::self_loops_equal(sp);
  auto leak = detail::var(sp, kParkedFull, kParkedEmpty);
  auto taken = detail::var(sp, kParkedFull, kGone);
  auto returned = detail::var(sp, kGone, kParkedEmpty);
  rel.push_back({leak, constraint_rel::lt, taken});
  rel.push_back({taken, constraint_rel::eq, returned});
  rel.push_back({taken, constraint_rel::lt,
                 detail::var(sp, kParkedFull, kParkedFull)});
  return constraint_set(sp, rel, detail::car_impossible(sp));
}

// Partial order: the three change transitions each strictly below the
// self-loops but mutually unrelated.
inline constraint_set car_partial_constraints() {
  auto sp = car_space();
  auto rel = detail::self_loops_equal(sp);
  auto pfpf = detail::var(sp, kParkedFull, kParkedFull);
  for (const char* to : {kParkedEmpty, kGone})
    rel.push_back({detail::var(sp, kParkedFull, to), constraint_rel::lt, pfpf});
  rel.push_back(
      {detail::var(sp, kGone, kParkedEmpty), constraint_rel::lt, pfpf});
  return constraint_set(sp, rel, detail::car_impossible(sp));
}

// ... plus a gas leak being MORE plausible than the car being taken.
inline constraint_set car_partial_leak_preferred() {
  auto sp = car_space();
  auto rel = detail::self_loops_equal(sp);
  auto pfpf = detail::var(sp, kParkedFull, kParkedFull);
  auto leak = detail::var(sp, kParkedFull, kParkedEmpty);
  auto taken = detail::var(sp, kParkedFull, kGone);
  auto returned = detail::var(sp, kGone, kParkedEmpty);
  for (auto v : {leak, taken, returned})
    rel.push_back({v, constraint_rel::lt, pfpf});
  rel.push_back({taken, constraint_rel::lt, leak});
  return constraint_set(sp, rel, detail::car_impossible(sp));
}

// ... or a gas leak being LESS plausible than either taking or returning.
inline constraint_set car_partial_leak_least() {
  auto sp = car_space();
  auto rel = detail::self_loops_equal(sp);
  auto pfpf = detail::var(sp, kParkedFull, kParkedFull);
  auto leak = detail::var(sp, kParkedFull, kParkedEmpty);
  auto taken = detail::var(sp, kParkedFull, kGone);
  auto returned = detail::var(sp, kGone, kParkedEmpty);
  for (auto v : {leak, taken, returned})
    rel.push_back({v, constraint_rel::lt, pfpf});
  rel.push_back({leak, constraint_rel::lt, taken});
  rel.push_back({leak, constraint_rel::lt, returned});
  return constraint_set(sp, rel, detail::car_impossible(sp));
}

// Seeds whose sampled chain models are the two reference tables
// (change ranks 3/1/1 and 3/2/2, self-loops 0). Frozen by search; the
// sampler is deterministic per seed.
inline constexpr std::uint64_t k_chain_seed_first = 11;
inline constexpr std::uint64_t k_chain_seed_second = 9;

}  // namespace qmb::scenarios
