#pragma once

// Running a classical policy on the pull/no-pull round clock.
//
//  * run_naive: one policy decision per round, pulled at its slot.
//  * run_seq:   the policy's current recommendation is pulled whenever it is
//               the offered arm; the recommendation is refreshed only after
//               a pull, so several pulls per round are possible.
//  * run_seq_ucbe_lp / run_seq_ucbe_lr: best-arm stopping variants of
//               run_seq, halted at a pull budget or at a round budget.
//
// Policies that need_init() get one pull per arm first, counted in n. The
// naive adapter spends the first K rounds on it, run_seq the first round.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "spnb/bandit_core.hpp"
#include "spnb/policies.hpp"

namespace spnb {

enum class Action : std::uint8_t { kSkip = 0, kPull = 1 };

struct TraceStep {
  TimeStep t = 0;
  std::int64_t round = 0;
  ArmIndex offered = 0;
  Action action = Action::kSkip;
  /// -1 on SKIP, otherwise the observed 0/1 outcome.
  std::int8_t feedback = -1;
  std::int64_t n_after = 0;

  bool pulled() const { return action == Action::kPull; }
  std::optional<int> outcome() const {
    if (feedback < 0) return std::nullopt;
    return feedback;
  }
  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::size_t arms = 0;
  std::int64_t rounds = 0;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t seed = 0;
  std::vector<TraceStep> steps;

  std::int64_t total_pulls() const {
    return steps.empty() ? 0 : steps.back().n_after;
  }
  bool operator==(const Trace&) const = default;
};

enum class BaiMode { kNaive, kLimitedPulls, kLimitedRounds, kSrPlus, kUcbRevPlus };
std::string_view bai_mode_id(BaiMode mode);

struct BAIResult {
  ArmIndex guess = 0;
  std::int64_t rounds_used = 0;
  std::int64_t pulls_used = 0;
  BaiMode mode = BaiMode::kNaive;
  /// Pull budget not reached within the horizon (limited-pulls mode only).
  bool truncated = false;
};

struct RunOutcome {
  Trace trace;
  BAIResult bai;
};

namespace detail {

class TraceWriter {
 public:
  TraceWriter(const RoundClock& clock, std::uint64_t seed) : clock_(clock) {
    trace_.arms = clock.arms();
    trace_.rounds = clock.rounds();
    trace_.seed = seed;
    trace_.steps.reserve(static_cast<std::size_t>(clock.horizon()));
  }

  TimeStep now() const { return static_cast<TimeStep>(trace_.steps.size()); }
  bool done() const { return now() >= clock_.horizon(); }
  std::int64_t pulls() const { return n_; }
  ArmIndex offered() const { return offered_arm(now(), clock_.arms()); }

  void skip() { push(Action::kSkip, -1); }
  void pull(int x) {
    ++n_;
    last_pull_round_ = clock_.round_of(now());
    push(Action::kPull, static_cast<std::int8_t>(x));
  }
  void skip_rest() {
    while (!done()) skip();
  }
  std::int64_t last_pull_round() const { return last_pull_round_; }

  Trace take() { return std::move(trace_); }

 private:
  void push(Action a, std::int8_t x) {
    const TimeStep t = now();
    trace_.steps.push_back(TraceStep{t, clock_.round_of(t),
                                     offered_arm(t, clock_.arms()), a, x, n_});
  }

  const RoundClock& clock_;
  Trace trace_;
  std::int64_t n_ = 0;
  std::int64_t last_pull_round_ = -1;
};

template <BanditPolicy P>
void check_arms(const P& policy, const RoundClock& clock) {
  if (policy.arms() != clock.arms()) {
    throw PreconditionError("policy and clock disagree on K");
  }
}

struct SeqRun {
  Trace trace;
  std::int64_t last_pull_round = -1;
};

// Shared body of run_seq and its stopping variants. pull_budget < 0 means
// run to the horizon.
template <BanditPolicy P>
SeqRun seq_loop(P& policy, const RoundClock& clock, FeedbackSource& feedback,
                RngStream& rng, std::int64_t pull_budget, std::uint64_t seed) {
  check_arms(policy, clock);
  TraceWriter w(clock, seed);
  auto budget_hit = [&] { return pull_budget >= 0 && w.pulls() >= pull_budget; };

  if (policy.needs_init()) {
    for (ArmIndex i = 0; i < clock.arms() && !budget_hit(); ++i) {
      const int x = feedback.draw(i);
      policy.update(i, x);
      w.pull(x);
    }
  }
  if (budget_hit()) {
    w.skip_rest();
    const auto last = w.last_pull_round();
    return SeqRun{w.take(), last};
  }
  ArmIndex recommendation = policy.select(rng);
  while (!w.done()) {
    if (w.offered() == recommendation) {
      const int x = feedback.draw(recommendation);
      policy.update(recommendation, x);
      w.pull(x);
      if (budget_hit()) {
        w.skip_rest();
        break;
      }
      recommendation = policy.select(rng);
    } else {
      w.skip();
    }
  }
  const auto last = w.last_pull_round();
  return SeqRun{w.take(), last};
}

}  // namespace detail

/// One pull per round at the slot of the policy's choice; tau pulls in total.
template <BanditPolicy P>
Trace run_naive(P& policy, const RoundClock& clock, FeedbackSource& feedback,
                RngStream& rng, std::uint64_t seed = 0) {
  detail::check_arms(policy, clock);
  const std::int64_t init_rounds =
      policy.needs_init() ? static_cast<std::int64_t>(clock.arms()) : 0;
  if (clock.rounds() < init_rounds) {
    throw PreconditionError("naive adapter needs tau >= K for initialization");
  }
  detail::TraceWriter w(clock, seed);
  for (std::int64_t r = 0; r < clock.rounds(); ++r) {
    const ArmIndex chosen = r < init_rounds ? static_cast<ArmIndex>(r)
                                            : policy.select(rng);
    for (ArmIndex slot = 0; slot < clock.arms(); ++slot) {
      if (slot == chosen) {
        const int x = feedback.draw(chosen);
        policy.update(chosen, x);
        w.pull(x);
      } else {
        w.skip();
      }
    }
  }
  return w.take();
}

/// The Seq meta-algorithm over the whole horizon.
template <BanditPolicy P>
Trace run_seq(P& policy, const RoundClock& clock, FeedbackSource& feedback,
              RngStream& rng, std::uint64_t seed = 0) {
  return detail::seq_loop(policy, clock, feedback, rng, -1, seed).trace;
}

/// Seq halted the moment `budget` pulls have been made.
template <BanditPolicy P>
RunOutcome run_seq_limited_pulls(P& policy, const RoundClock& clock,
                                 std::int64_t budget, FeedbackSource& feedback,
                                 RngStream& rng, std::uint64_t seed = 0) {
  if (budget < static_cast<std::int64_t>(clock.arms())) {
    throw PreconditionError("pull budget must be at least K");
  }
  auto run = detail::seq_loop(policy, clock, feedback, rng, budget, seed);
  BAIResult r;
  r.mode = BaiMode::kLimitedPulls;
  r.pulls_used = run.trace.total_pulls();
  r.rounds_used = run.last_pull_round + 1;
  r.truncated = r.pulls_used < budget;
  r.guess = policy.recommend();
  return RunOutcome{std::move(run.trace), r};
}

/// Seq over exactly clock.rounds() rounds; pulls_used is whatever it took.
template <BanditPolicy P>
RunOutcome run_seq_limited_rounds(P& policy, const RoundClock& clock,
                                  FeedbackSource& feedback, RngStream& rng,
                                  std::uint64_t seed = 0) {
  auto run = detail::seq_loop(policy, clock, feedback, rng, -1, seed);
  BAIResult r;
  r.mode = BaiMode::kLimitedRounds;
  r.pulls_used = run.trace.total_pulls();
  r.rounds_used = clock.rounds();
  r.guess = policy.recommend();
  return RunOutcome{std::move(run.trace), r};
}

/// Seq(UCB-E) stopped at an equal pull budget.
BAIResult run_seq_ucbe_lp(PolicyState policy, const Environment& env,
                          std::int64_t budget, FeedbackSource& feedback,
                          RngStream& rng);

/// Seq(UCB-E) stopped after `rounds` rounds.
BAIResult run_seq_ucbe_lr(PolicyState policy, const ArmSet& arms,
                          std::int64_t rounds, FeedbackSource& feedback,
                          RngStream& rng);

/// Naive adapter as a best-arm procedure: tau pulls, then recommend.
RunOutcome run_naive_bai(PolicyState& policy, const RoundClock& clock,
                         FeedbackSource& feedback, RngStream& rng,
                         std::uint64_t seed = 0);

}  // namespace spnb
