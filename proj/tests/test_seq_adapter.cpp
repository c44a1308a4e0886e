#include <gtest/gtest.h>

#include <vector>

#include "spnb/metrics.hpp"
#include "spnb/seq_adapter.hpp"

using namespace spnb;

namespace {

// Always recommends the same arm; no initialization.
struct FixedPolicy {
  std::size_t k;
  ArmIndex arm;
  ArmIndex select(RngStream&) const { return arm; }
  void update(ArmIndex, int) {}
  bool needs_init() const { return false; }
  std::size_t arms() const { return k; }
  ArmIndex recommend() const { return arm; }
};

// Recommends 0, then the next arm after every pull.
struct CyclingPolicy {
  std::size_t k;
  ArmIndex next = 0;
  int selects = 0;
  ArmIndex select(RngStream&) {
    ++selects;
    return next;
  }
  void update(ArmIndex i, int) { next = (i + 1) % k; }
  bool needs_init() const { return false; }
  std::size_t arms() const { return k; }
  ArmIndex recommend() const { return 0; }
};

// Counts select() calls of a wrapped PolicyState.
struct CountingPolicy {
  PolicyState inner;
  int selects = 0;
  ArmIndex select(RngStream& rng) {
    ++selects;
    return inner.select(rng);
  }
  void update(ArmIndex i, int x) { inner.update(i, x); }
  bool needs_init() const { return true; }
  std::size_t arms() const { return inner.arms(); }
  ArmIndex recommend() const { return inner.recommend(); }
};

PolicyParams params_for(PolicyKind kind, const ArmSet& arms, std::int64_t tau) {
  PolicyParams p;
  p.horizon_pulls = tau * static_cast<std::int64_t>(arms.size());
  if (kind == PolicyKind::kUcbE) {
    p.ucbe_a = ucbe_exploration(2.0, tau, arms.size(), hardness_h1(arms.means()));
  }
  return p;
}

void expect_well_formed(const Trace& tr) {
  ASSERT_EQ(static_cast<std::int64_t>(tr.steps.size()),
            tr.rounds * static_cast<std::int64_t>(tr.arms));
  std::int64_t n = 0;
  for (std::size_t j = 0; j < tr.steps.size(); ++j) {
    const auto& s = tr.steps[j];
    EXPECT_EQ(s.t, static_cast<TimeStep>(j));
    EXPECT_EQ(s.round, s.t / static_cast<TimeStep>(tr.arms));
    EXPECT_EQ(s.offered, offered_arm(s.t, tr.arms));
    EXPECT_EQ(s.pulled(), s.outcome().has_value());
    if (s.pulled()) ++n;
    EXPECT_EQ(s.n_after, n);
  }
}

std::vector<std::pair<ArmIndex, int>> pulled_sequence(const Trace& tr) {
  std::vector<std::pair<ArmIndex, int>> out;
  for (const auto& s : tr.steps) {
    if (s.pulled()) out.emplace_back(s.offered, *s.outcome());
  }
  return out;
}

// The policy outside the round clock: sweep, then select/draw/update.
std::vector<std::pair<ArmIndex, int>> plain_bandit_loop(PolicyState policy,
                                                        FeedbackSource& fb,
                                                        RngStream& rng,
                                                        std::int64_t pulls) {
  std::vector<std::pair<ArmIndex, int>> out;
  for (ArmIndex i = 0; i < policy.arms() && std::ssize(out) < pulls; ++i) {
    const int x = fb.draw(i);
    policy.update(i, x);
    out.emplace_back(i, x);
  }
  while (std::ssize(out) < pulls) {
    const ArmIndex i = policy.select(rng);
    const int x = fb.draw(i);
    policy.update(i, x);
    out.emplace_back(i, x);
  }
  return out;
}

}  // namespace

TEST(RunNaive, OnePullPerRound) {
  const ArmSet arms({0.3, 0.6, 0.5, 0.1});
  const RoundClock clock(4, 300);
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  PolicyState p(PolicyKind::kUcb1, 4);
  const auto tr = run_naive(p, clock, fb, pr);
  expect_well_formed(tr);
  EXPECT_EQ(tr.total_pulls(), 300);
  for (double v : npr(tr).values) EXPECT_EQ(v, 1.0);
  // initialization: round r < K pulls arm r
  for (std::int64_t r = 0; r < 4; ++r) {
    EXPECT_TRUE(tr.steps[r * 4 + r].pulled());
  }
}

TEST(RunNaive, FixedArmPullsEvenSteps) {
  const ArmSet arms({0.3, 0.6});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  FixedPolicy p{2, 0};
  const auto tr = run_naive(p, RoundClock(2, 50), fb, pr);
  for (const auto& s : tr.steps) EXPECT_EQ(s.pulled(), s.t % 2 == 0) << s.t;
}

TEST(RunNaive, NeedsRoomForInitialization) {
  const ArmSet arms({0.3, 0.6, 0.2});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  PolicyState p(PolicyKind::kUcb1, 3);
  EXPECT_THROW(run_naive(p, RoundClock(3, 2), fb, pr), PreconditionError);
  PolicyState wrong_k(PolicyKind::kUcb1, 2);
  EXPECT_THROW(run_naive(wrong_k, RoundClock(3, 10), fb, pr), PreconditionError);
}

TEST(RunSeq, FixedRecommendationPullsOncePerRound) {
  const ArmSet arms({0.3, 0.6});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  FixedPolicy p{2, 0};
  const auto tr = run_seq(p, RoundClock(2, 40), fb, pr);
  for (const auto& s : tr.steps) EXPECT_EQ(s.pulled(), s.t % 2 == 0);
  for (double v : npr(tr).values) EXPECT_EQ(v, 1.0);
}

TEST(RunSeq, AlternatingRecommendationPullsEverySlot) {
  const ArmSet arms({0.3, 0.6});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  CyclingPolicy p{2};
  const auto tr = run_seq(p, RoundClock(2, 40), fb, pr);
  for (double v : npr(tr).values) EXPECT_EQ(v, 2.0);
  EXPECT_EQ(tr.total_pulls(), 80);
}

TEST(RunSeq, InitializationRoundPullsEveryArm) {
  const ArmSet arms({0.3, 0.6, 0.5, 0.1, 0.2});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  PolicyState p(PolicyKind::kThompson, 5);
  const auto tr = run_seq(p, RoundClock(5, 200), fb, pr);
  expect_well_formed(tr);
  const auto n = npr(tr).values;
  EXPECT_EQ(n.front(), 5.0);
  for (double v : n) {
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 5.0);
  }
  EXPECT_GE(tr.total_pulls(), 200);
  EXPECT_LE(tr.total_pulls(), 1000);
}

TEST(RunSeq, RecommendationRefreshedOnlyAfterPulls) {
  const ArmSet arms({0.3, 0.6, 0.5});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  CountingPolicy p{PolicyState(PolicyKind::kThompson, 3)};
  const auto tr = run_seq(p, RoundClock(3, 300), fb, pr);
  // one select after the sweep, then one per later pull
  EXPECT_EQ(p.selects, tr.total_pulls() - 3 + 1);
}

TEST(RunSeq, Deterministic) {
  const ArmSet arms({0.3, 0.6, 0.5});
  auto once = [&] {
    RngStream fr(8, StreamId::kFeedback), pr(8, StreamId::kPolicy);
    LazyFeedback fb(arms, fr);
    PolicyState p(PolicyKind::kThompson, 3);
    return run_seq(p, RoundClock(3, 500), fb, pr, 8);
  };
  EXPECT_EQ(once(), once());
}

TEST(RunSeq, PullSequenceEquivalence) {
  for (auto kind : {PolicyKind::kUcb1, PolicyKind::kBayesUcb,
                    PolicyKind::kThompson, PolicyKind::kUcbE}) {
    for (std::size_t k : {2u, 10u}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RngStream inst(seed, StreamId::kInstance);
        std::vector<double> m(k);
        for (auto& v : m) v = inst.uniform();
        const ArmSet arms = ArmSet::with_tie_break(m);
        const std::int64_t tau = 150;
        const auto params = params_for(kind, arms, tau);
        RngStream table_rng(seed, StreamId::kFeedback);
        const auto table = TableFeedback::draw_table(
            arms, static_cast<std::size_t>(tau) * k, table_rng);

        TableFeedback fb1 = table;
        RngStream pr1(seed, StreamId::kPolicy);
        PolicyState p1(kind, k, params);
        const auto tr = run_seq(p1, RoundClock(k, tau), fb1, pr1);

        TableFeedback fb2 = table;
        RngStream pr2(seed, StreamId::kPolicy);
        const auto ref = plain_bandit_loop(PolicyState(kind, k, params), fb2,
                                           pr2, tr.total_pulls());
        EXPECT_EQ(pulled_sequence(tr), ref)
            << policy_id(kind) << " K=" << k << " seed=" << seed;
      }
    }
  }
}

TEST(SeqLimitedPulls, BudgetOfKStopsAfterSweep) {
  const Environment env(ArmSet({0.5, 0.4, 0.3}), 100);
  RngStream fr(1), pr(2);
  LazyFeedback fb(env.arms, fr);
  PolicyParams params;
  params.ucbe_a = 1.0;
  const auto r = run_seq_ucbe_lp(PolicyState(PolicyKind::kUcbE, 3, params), env,
                                 3, fb, pr);
  EXPECT_EQ(r.rounds_used, 1);
  EXPECT_EQ(r.pulls_used, 3);
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(r.mode, BaiMode::kLimitedPulls);
}

TEST(SeqLimitedPulls, RoundsNeverExceedBudget) {
  const Environment env(ArmSet({0.5, 0.45, 0.4, 0.3}), 400);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream fr(seed, StreamId::kFeedback), pr(seed, StreamId::kPolicy);
    LazyFeedback fb(env.arms, fr);
    PolicyParams params;
    params.ucbe_a = ucbe_exploration(2.0, 400, 4, hardness_h1(env.arms.means()));
    const auto r = run_seq_ucbe_lp(PolicyState(PolicyKind::kUcbE, 4, params),
                                   env, 400, fb, pr);
    EXPECT_EQ(r.pulls_used, 400);
    EXPECT_LE(r.rounds_used, 400);
    EXPECT_GE(r.rounds_used, 100);
    EXPECT_LE(r.pulls_used, r.rounds_used * 4);
  }
}

TEST(SeqLimitedPulls, TruncationReported) {
  const ArmSet arms({0.3, 0.6});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  FixedPolicy p{2, 1};
  const auto out = run_seq_limited_pulls(p, RoundClock(2, 10), 50, fb, pr);
  EXPECT_TRUE(out.bai.truncated);
  EXPECT_EQ(out.bai.pulls_used, 10);
  EXPECT_EQ(out.bai.rounds_used, 10);
  FixedPolicy q{2, 1};
  EXPECT_THROW(run_seq_limited_pulls(q, RoundClock(2, 10), 1, fb, pr),
               PreconditionError);
}

TEST(SeqLimitedPulls, TraceAfterBudgetIsAllSkips) {
  const ArmSet arms({0.3, 0.6, 0.4});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  PolicyState p(PolicyKind::kUcb1, 3);
  const auto out = run_seq_limited_pulls(p, RoundClock(3, 100), 60, fb, pr);
  expect_well_formed(out.trace);
  EXPECT_EQ(out.trace.total_pulls(), 60);
  for (const auto& s : out.trace.steps) {
    if (s.round >= out.bai.rounds_used) {
      EXPECT_FALSE(s.pulled());
    }
  }
}

TEST(SeqLimitedRounds, PullsBetweenTauAndT) {
  const ArmSet arms({0.5, 0.45, 0.4});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream fr(seed), pr(seed + 100);
    LazyFeedback fb(arms, fr);
    PolicyParams params;
    params.ucbe_a = 3.0;
    const auto r = run_seq_ucbe_lr(PolicyState(PolicyKind::kUcbE, 3, params),
                                   arms, 200, fb, pr);
    EXPECT_EQ(r.rounds_used, 200);
    EXPECT_GE(r.pulls_used, 200);
    EXPECT_LE(r.pulls_used, 600);
    EXPECT_EQ(r.mode, BaiMode::kLimitedRounds);
  }
}

TEST(SeqLimitedRounds, OfferedArmRecommenderPullsEverything) {
  const ArmSet arms({0.5, 0.45, 0.4, 0.2});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  CyclingPolicy p{4};
  const auto out = run_seq_limited_rounds(p, RoundClock(4, 25), fb, pr);
  EXPECT_EQ(out.bai.pulls_used, 100);
}

TEST(NaiveBai, UsesTauPulls) {
  const ArmSet arms({0.9, 0.1});
  RngStream fr(1), pr(2);
  LazyFeedback fb(arms, fr);
  PolicyState p(PolicyKind::kUcb1, 2);
  const auto out = run_naive_bai(p, RoundClock(2, 100), fb, pr);
  EXPECT_EQ(out.bai.pulls_used, 100);
  EXPECT_EQ(out.bai.rounds_used, 100);
  EXPECT_EQ(out.bai.guess, 0u);
  EXPECT_EQ(out.bai.mode, BaiMode::kNaive);
}
