#include "spnb/seq_adapter.hpp"

namespace spnb {

std::string_view bai_mode_id(BaiMode mode) {
  switch (mode) {
    case BaiMode::kNaive:
      return "naive";
    case BaiMode::kLimitedPulls:
      return "lp";
    case BaiMode::kLimitedRounds:
      return "lr";
    case BaiMode::kSrPlus:
      return "sr-plus";
    case BaiMode::kUcbRevPlus:
      return "ucbrev-plus";
  }
  return "?";
}

BAIResult run_seq_ucbe_lp(PolicyState policy, const Environment& env,
                          std::int64_t budget, FeedbackSource& feedback,
                          RngStream& rng) {
  return run_seq_limited_pulls(policy, env.clock, budget, feedback, rng).bai;
}

BAIResult run_seq_ucbe_lr(PolicyState policy, const ArmSet& arms,
                          std::int64_t rounds, FeedbackSource& feedback,
                          RngStream& rng) {
  if (rounds < 1) throw PreconditionError("round budget must be positive");
  const RoundClock clock(arms.size(), rounds);
  return run_seq_limited_rounds(policy, clock, feedback, rng).bai;
}

RunOutcome run_naive_bai(PolicyState& policy, const RoundClock& clock,
                         FeedbackSource& feedback, RngStream& rng,
                         std::uint64_t seed) {
  Trace trace = run_naive(policy, clock, feedback, rng, seed);
  BAIResult r;
  r.mode = BaiMode::kNaive;
  r.guess = policy.recommend();
  r.rounds_used = clock.rounds();
  r.pulls_used = trace.total_pulls();
  return RunOutcome{std::move(trace), r};
}

}  // namespace spnb
