#pragma once

// Round-aware elimination: every surviving arm is pulled once per round and
// arms are dropped at checkpoint rounds.
//
//  * UCBrev+ (regret): at the first round t >= ceil(2 ln(tau d^2) / d^2),
//    with d = 2^-m, drop arms whose upper confidence bound lies below the
//    best lower bound, radius sqrt(ln(t d^2) / (2t)); then halve d.
//  * SR+ (best arm): after completing round n_k drop the surviving arm with
//    the lowest empirical mean; K-1 checkpoints, the last survivor is the
//    guess.
//
// Rounds are counted from 1 in the checkpoint formulas. Logs are natural.

#include <cstdint>
#include <vector>

#include "spnb/bandit_core.hpp"
#include "spnb/seq_adapter.hpp"

namespace spnb {

/// 1/2 + sum_{i=2..K} 1/i.
double log_bar(std::size_t arms);

/// n_k = ceil((tau - K) / (log_bar(K) * (K + 1 - k))), k = 1..K-1.
std::vector<std::int64_t> sr_checkpoints(std::size_t arms, std::int64_t rounds);

/// UCBrev+ checkpoint round for phase width d; at least 1.
std::int64_t ucbrev_checkpoint(std::int64_t rounds, double delta_tilde);

/// UCBrev+ confidence radius at round t; radicand clamped at 0.
double ucbrev_radius(std::int64_t t, double delta_tilde);

struct EliminationState {
  std::vector<ArmIndex> surviving;
  int phase = 0;
  double delta_tilde = 1.0;
  std::vector<std::int64_t> checkpoints;
  std::vector<std::int64_t> pulls;
  std::vector<std::int64_t> successes;
  /// Round (1-based) of each elimination event, in order.
  std::vector<std::int64_t> elimination_rounds;

  explicit EliminationState(std::size_t arms);
  double empirical_mean(ArmIndex i) const;
  bool alive(ArmIndex i) const;
};

struct EliminationRun {
  Trace trace;
  BAIResult bai;
  EliminationState state;
};

EliminationRun run_sr_plus_traced(const Environment& env,
                                  FeedbackSource& feedback,
                                  std::uint64_t seed = 0);
EliminationRun run_ucbrev_plus_traced(const Environment& env,
                                      FeedbackSource& feedback,
                                      std::uint64_t seed = 0);

/// Best-arm guess of SR+; pulls every surviving arm each round.
BAIResult run_sr_plus(const Environment& env, RngStream& rng);
/// Decision trace of UCBrev+.
Trace run_ucbrev_plus(const Environment& env, RngStream& rng);

}  // namespace spnb
