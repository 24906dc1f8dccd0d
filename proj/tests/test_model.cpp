#include "qmb/model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "qmb/scenarios.hpp"

using namespace qmb;
namespace sc = qmb::scenarios;

namespace {

plaus_value k(std::uint64_t v) { return plaus_value::kappa(v); }
plaus_value kinf() { return plaus_value::kappa(extended_nat::infinity()); }

std::vector<int> path_of(const state_space& sp,
                         const std::vector<std::string>& ids) {
  std::vector<int> out;
  for (const auto& id : ids) out.push_back(sp.require_index(id));
  return out;
}

TEST(StateSpace, Validation) {
  EXPECT_THROW(state_space({}, "a"), validation_error);
  EXPECT_THROW(state_space({"a", "a"}, "a"), validation_error);
  EXPECT_THROW(state_space({"a", ""}, "a"), validation_error);
  EXPECT_THROW(state_space({"a", "b"}, "c"), validation_error);
  state_space one({"a"}, "a");  // degenerate but accepted
  EXPECT_EQ(one.size(), 1);
  state_space sp({"a", "b"}, "b");
  EXPECT_EQ(sp.init_index(), 1);
  EXPECT_THROW(sp.require_index("z"), unknown_state);
}

TEST(ValidateModel, CarModelRowsNormalize) {
  auto report = validate_model(sc::car_model());
  EXPECT_TRUE(report.valid());
  EXPECT_TRUE(report.unreachable.empty());
}

TEST(ValidateModel, RowWithoutTopEntryFlagged) {
  state_space sp({"PF", "PE", "G"}, "PF");
  transition_model m(sp, domain_kind::kappa());
  m.set(0, 1, k(1));
  m.set(0, 2, k(2));
  m.set(1, 1, k(0));
  m.set(2, 2, k(0));
  auto report = validate_model(m);
  EXPECT_FALSE(report.valid());
  EXPECT_FALSE(report.rows[0].normalized);
  EXPECT_EQ(report.rows[0].row_sum, k(1));
  EXPECT_TRUE(report.rows[1].normalized);
}

TEST(ValidateModel, PossibilityRowMaxIsTop) {
  state_space sp({"a", "b"}, "a");
  transition_model m(sp, domain_kind::possibility());
  m.set(0, 0, plaus_value::possibility(rational(1, 2)));
  m.set(0, 1, plaus_value::possibility(rational(1, 1)));
  m.set(1, 1, plaus_value::possibility(rational(1, 1)));
  EXPECT_TRUE(validate_model(m).valid());
}

TEST(PrefixPlausibility, CarModelRuns) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  EXPECT_EQ(prefix_plausibility(m, path_of(sp, {"PF", "G", "PE", "PE"})), k(2));
  EXPECT_EQ(prefix_plausibility(m, path_of(sp, {"PF", "PF", "PF", "PF"})), k(0));
  EXPECT_EQ(prefix_plausibility(m, path_of(sp, {"PF", "PE", "G"})), kinf());
  EXPECT_EQ(prefix_plausibility(m, {sp.init_index()}), k(0));  // [s0] = top
  EXPECT_THROW(prefix_plausibility(m, {sp.init_index(), 17}), unknown_state);
  EXPECT_THROW(prefix_plausibility(m, path_of(sp, {"PE", "PE"})),
               validation_error);
}

TEST(EventPlausibility, CarScenarios) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  auto stolen = sc::evidence_stolen(sp);
  EXPECT_EQ(event_plausibility(m, 3, &stolen, nullptr, 0), k(1));
  auto borrowed = sc::evidence_borrowed3(sp);
  EXPECT_EQ(event_plausibility(m, 3, &borrowed, nullptr, 0), k(2));
  auto all = proposition::full(sp.size());
  EXPECT_EQ(event_plausibility(m, 0, nullptr, &all, 0), k(0));
}

TEST(Believes, StolenCar) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  auto stolen = sc::evidence_stolen(sp);
  EXPECT_TRUE(believes(m, stolen, sc::not_parked(sp), 3));
  // three tied minimal theft runs: no belief about the theft time
  EXPECT_FALSE(believes(m, stolen, sc::parked(sp), 1));
  EXPECT_FALSE(believes(m, stolen, sc::not_parked(sp), 1));
}

TEST(Believes, BorrowedCar) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  auto borrowed = sc::evidence_borrowed3(sp);
  // the unique minimal run is the borrowed one (rank 2 vs 3)
  EXPECT_TRUE(believes(m, borrowed, sc::not_parked(sp), 1));
}

TEST(Believes, InconsistentEvidenceRejected) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  // gone at time 1, then back parked-full at time 2: impossible in M1
  evidence e{sc::not_parked(sp), proposition::of(sp, {sc::kParkedFull})};
  EXPECT_THROW(believes(m, e, sc::parked(sp), 1), inconsistent_evidence);
}

TEST(Believes, MonotoneInThePropositionOnCarGrid) {
  auto m = sc::car_model();
  const auto& sp = m.space();
  const std::vector<evidence> evs = {sc::evidence_stolen(sp),
                                     sc::evidence_borrowed3(sp),
                                     sc::evidence_borrowed2(sp)};
  for (const auto& e : evs) {
    const int n = static_cast<int>(e.size());
    for (int maska = 1; maska < 8; ++maska) {
      for (int maskb = maska; maskb < 8; ++maskb) {
        if ((maska & maskb) != maska) continue;  // need a subset of b
        proposition a(sp.size()), b(sp.size());
        for (int s = 0; s < 3; ++s) {
          if (maska & (1 << s)) a.add(s);
          if (maskb & (1 << s)) b.add(s);
        }
        for (int at = 0; at <= n; ++at) {
          if (believes(m, e, a, at)) EXPECT_TRUE(believes(m, e, b, at));
        }
      }
    }
  }
}

// --- qualitativeness -------------------------------------------------------

TEST(Qualitative, KappaPriorsAreQualitative) {
  auto p = prior_from_model(sc::car_model(), 3);
  auto res = check_qualitative(p);
  EXPECT_TRUE(res.qualitative);
}

TEST(Qualitative, SingleAtomPrior) {
  state_space sp({"a"}, "a");
  finite_prior p(sp, domain_kind::kappa(), 1, {k(0)});
  EXPECT_TRUE(check_qualitative(p).qualitative);
  EXPECT_TRUE(check_closure_under_conjunction(p, 1u).closed);
}

// An additive measure (probability-like: values sum, numeric order) is not
// qualitative; the exhaustive search must find a three-singleton witness.
struct additive_fixture {
  std::vector<rational> vals;
  auto measure() const {
    return [this](std::uint32_t mask) {
      rational sum(0, 1);
      for (std::size_t i = 0; i < vals.size(); ++i)
        if (mask & (1u << i)) sum = sum + vals[i];
      return sum;
    };
  }
  static compare_result cmp(const rational& a, const rational& b) {
    auto c = a <=> b;
    if (c < 0) return compare_result::less;
    if (c > 0) return compare_result::greater;
    return compare_result::equal;
  }
};

TEST(Qualitative, AdditiveMeasureFailsQualitativeness) {
  additive_fixture f{{rational(2, 5), rational(3, 10), rational(3, 10)}};
  auto w = find_qualitativeness_violation(3, f.measure(), additive_fixture::cmp);
  ASSERT_TRUE(w.has_value());
  // witness sets are disjoint singletons partitioning {a, b, c}
  EXPECT_EQ(w->a | w->b | w->c, 7u);
  EXPECT_EQ(w->a & w->b, 0u);
  EXPECT_EQ(w->a & w->c, 0u);
  EXPECT_EQ(w->b & w->c, 0u);
  auto pl = f.measure();
  EXPECT_EQ(additive_fixture::cmp(pl(w->a | w->b), pl(w->c)),
            compare_result::greater);
  EXPECT_EQ(additive_fixture::cmp(pl(w->a | w->c), pl(w->b)),
            compare_result::greater);
  EXPECT_NE(additive_fixture::cmp(pl(w->a), pl(w->b | w->c)),
            compare_result::greater);
}

TEST(Qualitative, AdditiveMeasureBreaksConjunctionClosureAtFullEvidence) {
  additive_fixture f{{rational(2, 5), rational(3, 10), rational(3, 10)}};
  auto w = find_conjunction_violation(3, 7u, f.measure(), additive_fixture::cmp);
  ASSERT_TRUE(w.has_value());
}

TEST(Qualitative, CapIsEnforced) {
  additive_fixture f{std::vector<rational>(13, rational(1, 13))};
  EXPECT_THROW(
      find_qualitativeness_violation(13, f.measure(), additive_fixture::cmp),
      cap_exceeded);
}

// Cross-check: qualitativeness holds iff Bel(E) is conjunction-closed for
// every evidence event E. Exercised on kappa priors (always qualitative) and
// additive measures (violations must show up on both sides).
TEST(Qualitative, AgreesWithConjunctionClosureOverAllEvidence) {
  std::mt19937 rng(23);
  state_space sp({"a", "b"}, "a");
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<plaus_value> vals;
    bool any_top = false;
    for (int i = 0; i < 4; ++i) {
      auto r = rng() % 4;
      if (r == 0) any_top = true;
      vals.push_back(r == 3 ? kinf() : k(r));
    }
    if (!any_top) vals[rng() % 4] = k(0);
    finite_prior p(sp, domain_kind::kappa(), 2, vals);
    auto atoms = nonbottom_atoms(p);
    const std::uint32_t full =
        (1u << atoms.prefix_indices.size()) - 1;
    bool closed_everywhere = true;
    for (std::uint32_t e = 1; e <= full; ++e)
      if (!check_closure_under_conjunction(p, e).closed)
        closed_everywhere = false;
    EXPECT_EQ(check_qualitative(p).qualitative, closed_everywhere);
  }

  // additive side, direct over masks
  for (int trial = 0; trial < 30; ++trial) {
    int atoms = 2 + static_cast<int>(rng() % 3);
    additive_fixture f;
    for (int i = 0; i < atoms; ++i)
      f.vals.push_back(rational(1 + static_cast<std::int64_t>(rng() % 5), 10));
    bool qualitative =
        !find_qualitativeness_violation(atoms, f.measure(), additive_fixture::cmp)
             .has_value();
    bool closed_everywhere = true;
    const std::uint32_t full = (1u << atoms) - 1;
    for (std::uint32_t e = 1; e <= full; ++e)
      if (find_conjunction_violation(atoms, e, f.measure(),
                                     additive_fixture::cmp)
              .has_value())
        closed_everywhere = false;
    EXPECT_EQ(qualitative, closed_everywhere);
  }
}

// Markovian priors over totally ordered domains with idempotent plus are
// qualitative; spot instances.
TEST(Qualitative, MarkovianInstancesAreQualitative) {
  state_space sp({"a", "b"}, "a");
  transition_model poss(sp, domain_kind::possibility());
  poss.set(0, 0, plaus_value::possibility(rational(1, 1)));
  poss.set(0, 1, plaus_value::possibility(rational(1, 3)));
  poss.set(1, 0, plaus_value::possibility(rational(1, 2)));
  poss.set(1, 1, plaus_value::possibility(rational(1, 1)));
  ASSERT_TRUE(validate_model(poss).valid());
  for (int horizon = 1; horizon <= 3; ++horizon)
    EXPECT_TRUE(check_qualitative(prior_from_model(poss, horizon)).qualitative);
}

TEST(FinitePrior, EncodingRoundTripsAndInvariantsHold) {
  state_space sp({"a", "b"}, "a");
  finite_prior p(sp, domain_kind::kappa(), 2, {k(0), k(1), k(2), kinf()});
  for (std::size_t i = 0; i < p.prefix_count(); ++i)
    EXPECT_EQ(p.encode(p.decode(i)), i);
  EXPECT_EQ(p.rank_of({0, 1, 0}), k(2));
  // must plus-sum to top
  EXPECT_THROW(finite_prior(sp, domain_kind::kappa(), 1, {k(1), k(2)}),
               validation_error);
  EXPECT_THROW(finite_prior(sp, domain_kind::kappa(), 1, {k(0)}),
               validation_error);
}

}  // namespace
